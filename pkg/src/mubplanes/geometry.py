"""Symplectic and orthogonal geometry on Z_p^(2n): spreads, spread sets, verifiers.

Vectors of Z_p^(2n) are written (a | b) with a, b in Z_p^n.  The alternating
form is ((a,b),(c,d)) = a.d - b.c, the form induced on X(a)Z(b) by group
commutators.  For p = 2 the quadratic form is Q(a,b) = a.b, because
(X(a)Z(b))^2 = (-1)^(a.b) I; it polarizes to the alternating form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import linalg as la
from .errors import (
    BadParameters,
    DimensionMismatch,
    InvalidSpreadSet,
    MembersNotInSpread,
    NotCommutative,
    TooLarge,
    ZeroDivisor,
)
from .linalg import Matrix, vspace
from .report import CheckReport

Vector = tuple[int, ...]

ENUMERATION_LIMIT = 1 << 22


def symplectic_form(u: Sequence[int], v: Sequence[int], p: int) -> int:
    if len(u) != len(v) or len(u) % 2:
        raise DimensionMismatch(f"vectors of length {len(u)} and {len(v)}")
    n = len(u) // 2
    a, b, c, d = u[:n], u[n:], v[:n], v[n:]
    return (sum(x * y for x, y in zip(a, d)) - sum(x * y for x, y in zip(b, c))) % p


def quadratic_form_binary(v: Sequence[int]) -> int:
    if len(v) % 2:
        raise DimensionMismatch(f"odd length {len(v)}")
    n = len(v) // 2
    return sum(x * y for x, y in zip(v[:n], v[n:])) % 2


class SymplecticSpace:
    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        basis = la.identity(2 * n)
        gram = [[self.form(u, v) for v in basis] for u in basis]
        assert la.is_nonsingular(gram, p), "degenerate form"
        assert all(self.form(u, u) == 0 for u in basis)

    def form(self, u, v) -> int:
        return symplectic_form(u, v, self.p)


class QuadraticSpace:
    def __init__(self, n: int):
        self.n = n
        basis = la.identity(2 * n)
        for x, y in itertools.product(basis, repeat=2):
            s = tuple((a + b) % 2 for a, b in zip(x, y))
            polar = (self.q(s) - self.q(x) - self.q(y)) % 2
            assert polar == symplectic_form(x, y, 2), "Q does not polarize to the form"

    def q(self, v) -> int:
        return quadratic_form_binary(v)


@dataclass(frozen=True)
class Subspace:
    """Row space over Z_p, stored in reduced echelon form (canonical)."""

    p: int
    basis: Matrix
    length: int

    @classmethod
    def span(cls, rows: Sequence[Sequence[int]], p: int, length: int | None = None) -> "Subspace":
        rows = [tuple(int(x) for x in r) for r in rows]
        if length is None:
            if not rows:
                raise DimensionMismatch("cannot infer ambient dimension of an empty span")
            length = len(rows[0])
        if any(len(r) != length for r in rows):
            raise DimensionMismatch("rows of unequal length")
        red, _ = la.rref(rows, p)
        return cls(p, red, length)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return la.rank(list(self.basis) + [list(v)], self.p) == self.dim

    def vectors(self):
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield tuple(sum(c * r[k] for c, r in zip(coeffs, self.basis)) % self.p
                        for k in range(self.length))

    def meet_dim(self, other: "Subspace") -> int:
        return self.dim + other.dim - la.rank(list(self.basis) + list(other.basis), self.p)

    def isotropy_witness(self) -> tuple[Vector, Vector] | None:
        for u, v in itertools.combinations(self.basis, 2):
            if symplectic_form(u, v, self.p):
                return u, v
        return None

    def singularity_witness(self) -> Vector | tuple[Vector, Vector] | None:
        for u in self.basis:
            if quadratic_form_binary(u):
                return u
        return self.isotropy_witness()

    def rows_str(self) -> str:
        return "[" + ", ".join("".join(map(str, r)) for r in self.basis) + "]"


def graph(mat: Sequence[Sequence[int]], p: int) -> Subspace:
    """{(v, Mv)} as a subspace of Z_p^(2n)."""
    n = len(mat)
    rows = [tuple(int(i == j) for i in range(n)) + tuple(mat[i][j] % p for i in range(n))
            for j in range(n)]
    return Subspace.span(rows, p)


def vertical(p: int, n: int) -> Subspace:
    """0 + V."""
    return Subspace.span([(0,) * n + tuple(int(i == j) for i in range(n)) for j in range(n)], p)


def horizontal(p: int, n: int) -> Subspace:
    """V + 0."""
    return Subspace.span([tuple(int(i == j) for i in range(n)) + (0,) * n for j in range(n)], p)


@dataclass(frozen=True)
class SpreadSet:
    p: int
    n: int
    matrices: tuple[Matrix, ...]

    def check(self) -> CheckReport:
        name = "spreadset"
        want = self.p ** self.n
        if len(self.matrices) != want:
            return CheckReport(name, False, [f"{len(self.matrices)} matrices, expected {want}"],
                               witness=("count", len(self.matrices)))
        for k, m in enumerate(self.matrices):
            if len(m) != self.n or any(len(r) != self.n for r in m):
                return CheckReport(name, False, [f"matrix {k} is not {self.n}x{self.n}"], witness=("shape", k))
            if not la.is_symmetric(m):
                return CheckReport(name, False, [f"matrix {k} not symmetric"], witness=("symmetric", k))
        for i, j in itertools.combinations(range(len(self.matrices)), 2):
            if not la.is_nonsingular(la.sub(self.matrices[i], self.matrices[j], self.p), self.p):
                return CheckReport(name, False, [f"M{i} - M{j} singular"], witness=("singular", i, j))
        return CheckReport(name, True, [f"{want} symmetric {self.n}x{self.n} matrices, all differences nonsingular"])

    def closed_under_addition(self) -> bool:
        members = set(self.matrices)
        return all(tuple(tuple((x + y) % self.p for x, y in zip(r, s)) for r, s in zip(a, b)) in members
                   for a, b in itertools.combinations_with_replacement(self.matrices, 2))


@dataclass(frozen=True)
class SymplecticSpread:
    p: int
    n: int
    members: tuple[Subspace, ...]

    def canonical(self) -> frozenset:
        return frozenset(m.basis for m in self.members)


@dataclass(frozen=True)
class OrthogonalSpread:
    n: int
    members: tuple[Subspace, ...]

    @property
    def p(self) -> int:
        return 2


# ----------------------------------------------------------------------
# verifiers
# ----------------------------------------------------------------------

def _coverage_witness(members, p, length, keep: Callable[[Vector], bool] | None = None):
    """First vector lying in two members, as (vector, i, j); None when disjoint."""
    owner: dict[Vector, int] = {}
    for i, m in enumerate(members):
        for v in m.vectors():
            if not any(v) or (keep and not keep(v)):
                continue
            if v in owner:
                return v, owner[v], i
            owner[v] = i
    return None


def _pairwise_witness(members, p, length):
    if p ** length <= ENUMERATION_LIMIT:
        return _coverage_witness(members, p, length)
    for (i, a), (j, b) in itertools.combinations(enumerate(members), 2):
        if a.meet_dim(b):
            return None, i, j
    return None


def verify_symplectic_spread(spread: SymplecticSpread) -> CheckReport:
    p, n = spread.p, spread.n
    name = "symplectic_spread"
    want = p ** n + 1
    members = spread.members
    if len(members) != want:
        return CheckReport(name, False, [f"{len(members)} members, expected {want}"],
                           witness=("count", len(members)))
    for i, m in enumerate(members):
        if m.length != 2 * n or m.dim != n:
            return CheckReport(name, False, [f"member {i} has dim {m.dim} in length {m.length}"],
                               witness=("dimension", i))
        w = m.isotropy_witness()
        if w:
            return CheckReport(name, False, [f"member {i} not totally isotropic: form{w} != 0"],
                               witness=("isotropy", i, w))
    hit = _pairwise_witness(members, p, 2 * n)
    if hit:
        v, i, j = hit
        return CheckReport(name, False, [f"members {i} and {j} intersect nontrivially at {v}"],
                           witness=("intersection", i, j, v))
    covered = sum(p ** m.dim - 1 for m in members)
    assert covered == p ** (2 * n) - 1
    return CheckReport(name, True, [f"{want} totally isotropic {n}-spaces of Z_{p}^{2 * n}, "
                                    f"partitioning the {covered} nonzero vectors"])


def verify_orthogonal_spread(spread: OrthogonalSpread) -> CheckReport:
    n = spread.n
    name = "orthogonal_spread"
    if n % 2:
        return CheckReport(name, False, [f"n={n} is odd; n must be even"], witness=("parity", n))
    want = 2 ** (n - 1) + 1
    members = spread.members
    if len(members) != want:
        return CheckReport(name, False, [f"{len(members)} members, expected {want}"],
                           witness=("count", len(members)))
    for i, m in enumerate(members):
        if m.length != 2 * n or m.dim != n:
            return CheckReport(name, False, [f"member {i} has dim {m.dim} in length {m.length}"],
                               witness=("dimension", i))
        w = m.singularity_witness()
        if w:
            return CheckReport(name, False, [f"member {i} not totally singular at {w}"],
                               witness=("singular", i, w))
    hit = _coverage_witness(members, 2, 2 * n)
    if hit:
        v, i, j = hit
        return CheckReport(name, False, [f"members {i} and {j} intersect at {v}"],
                           witness=("intersection", i, j, v))
    singular = sum(1 for v in itertools.product(range(2), repeat=2 * n)
                   if any(v) and quadratic_form_binary(v) == 0)
    covered = sum(2 ** m.dim - 1 for m in members)
    assert covered == singular
    return CheckReport(name, True, [f"{want} totally singular {n}-spaces of Z_2^{2 * n}, "
                                    f"covering the {singular} nonzero singular vectors once each"])


# ----------------------------------------------------------------------
# spread <-> spread set
# ----------------------------------------------------------------------

def spread_from_spreadset(K: SpreadSet) -> SymplecticSpread:
    rep = K.check()
    if not rep:
        raise InvalidSpreadSet(rep.line())
    members = (vertical(K.p, K.n),) + tuple(graph(m, K.p) for m in K.matrices)
    return SymplecticSpread(K.p, K.n, members)


def spreadset_from_spread(spread: SymplecticSpread,
                          at: tuple[Subspace, Subspace] | None = None) -> SpreadSet:
    """Spread set of `spread` w.r.t. a distinguished pair (A, B).

    A symplectic change of basis sends A to V+0 and B to 0+V; every other
    member then reads as a graph {(v, Mv)}.  With the default pair
    (V+0, 0+V) the basis change is the identity.
    """
    p, n = spread.p, spread.n
    if at is None:
        at = (horizontal(p, n), vertical(p, n))
    A, B = at
    canon = [m.basis for m in spread.members]
    if A.basis not in canon or B.basis not in canon:
        raise MembersNotInSpread("distinguished members are not in the spread")
    a = A.basis
    gram = [[symplectic_form(u, c, p) for c in B.basis] for u in a]
    ginv = la.inverse(gram, p)
    if ginv is None:
        raise InvalidSpreadSet("distinguished members are not complementary")
    # b_j = sum_k ginv[k][j] c_k so that form(a_i, b_j) = delta_ij
    b = [tuple(sum(ginv[k][j] * B.basis[k][t] for k in range(n)) % p for t in range(2 * n))
         for j in range(n)]
    to_new = la.inverse(list(a) + b, p)
    mats = []
    for m in spread.members:
        if m.basis == B.basis:
            continue
        coords = la.matmul(m.basis, to_new, p)
        xt = la.transpose([r[:n] for r in coords])
        yt = la.transpose([r[n:] for r in coords])
        xinv = la.inverse(xt, p)
        if xinv is None:
            raise InvalidSpreadSet(f"member {m.rows_str()} meets the distinguished 0+V")
        mats.append(la.matmul(yt, xinv, p))
    return SpreadSet(p, n, tuple(mats))


def semifield_to_spreadset(mult: np.ndarray, p: int, n: int) -> SpreadSet:
    """Spread set of a commutative semifield given as a product table on Z_p^n.

    ``mult[x, y]`` is the index (lexicographic) of x*y.  M(b)_ij = b.(e_i * e_j),
    so that b.(v*v) = v.M(b)v.
    """
    V = vspace(p, n)
    mult = np.asarray(mult, dtype=np.int64)
    if mult.shape != (V.size, V.size):
        raise DimensionMismatch(f"product table must be {V.size}x{V.size}")
    if not np.array_equal(mult, mult.T):
        x, y = map(int, np.argwhere(mult != mult.T)[0])
        raise NotCommutative(f"{V.vector(x)} * {V.vector(y)} != {V.vector(y)} * {V.vector(x)}")
    e = V.basis_indices
    struct = V.digits[mult[np.ix_(e, e)]]                      # (n, n, n): e_i * e_j
    predicted = np.einsum("xi,yj,ijk->xyk", V.digits, V.digits, struct) % p
    if not np.array_equal(predicted, V.digits[mult]):
        raise InvalidSpreadSet("product is not Z_p-bilinear")
    zero_hits = np.argwhere(mult[1:, 1:] == 0)
    if zero_hits.size:
        x, y = (int(k) + 1 for k in zero_hits[0])
        raise ZeroDivisor(f"{V.vector(x)} * {V.vector(y)} = 0")
    mats = []
    for bi in range(V.size):
        bvec = V.digits[bi]
        m = (struct @ bvec) % p                                 # m[i][j] = b . (e_i * e_j)
        mats.append(tuple(tuple(int(x) for x in row) for row in m))
    K = SpreadSet(p, n, tuple(mats))
    rep = K.check()
    if not rep:
        raise InvalidSpreadSet(rep.line())
    return K


# ----------------------------------------------------------------------
# orthogonal spreads by search
# ----------------------------------------------------------------------

def _ts_subspaces(n: int) -> list[Subspace]:
    """All totally singular n-spaces of Z_2^(2n), in canonical order."""
    singular = [v for v in itertools.product(range(2), repeat=2 * n)
                if any(v) and quadratic_form_binary(v) == 0]
    seen = set()
    frontier = {()}
    for _ in range(n):
        nxt = set()
        for basis in frontier:
            for v in singular:
                if any(symplectic_form(v, u, 2) for u in basis):
                    continue
                red, _ = la.rref(list(basis) + [v], 2)
                if len(red) == len(basis) + 1:
                    nxt.add(red)
        frontier = nxt
    for basis in sorted(frontier):
        seen.add(basis)
    return [Subspace(2, b, 2 * n) for b in sorted(seen)]


def search_orthogonal_spreads(n: int, limit: int) -> list[OrthogonalSpread]:
    """Depth-first search for orthogonal spreads of Z_2^(2n) (exact cover of singular vectors)."""
    if n % 2 or n < 2:
        raise BadParameters(f"orthogonal spreads need even n >= 2, got {n}")
    if 2 * n > 8:
        raise TooLarge(f"exhaustive search limited to 2n <= 8, got 2n = {2 * n}")
    if limit <= 0:
        return []
    spaces = _ts_subspaces(n)
    V = vspace(2, 2 * n)
    masks = []
    for s in spaces:
        bits = 0
        for v in s.vectors():
            if any(v):
                bits |= 1 << V.index(v)
        masks.append(bits)
    target = 0
    for k in range(1, V.size):
        if quadratic_form_binary(V.vector(k)) == 0:
            target |= 1 << k
    want = 2 ** (n - 1) + 1
    containing = {k: [i for i, m in enumerate(masks) if m >> k & 1]
                  for k in range(V.size) if target >> k & 1}
    found: list[OrthogonalSpread] = []

    def dfs(chosen: list[int], covered: int):
        if len(found) >= limit:
            return
        if covered == target:
            if len(chosen) == want:
                found.append(OrthogonalSpread(n, tuple(spaces[i] for i in chosen)))
            return
        rest = target & ~covered
        k = (rest & -rest).bit_length() - 1
        for i in containing[k]:
            if masks[i] & covered == 0:
                chosen.append(i)
                dfs(chosen, covered | masks[i])
                chosen.pop()

    dfs([], 0)
    return found
