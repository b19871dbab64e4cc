"""Orthoframes and sets of mutually unbiased orthoframes.

A frame of C^N (N = p^n) is stored as an N x N table of exponents: row r is
the unnormalised vector whose v-th entry is root^table[r, v], or 0 where
table[r, v] == -1.  Columns are indexed by v in Z_p^n (lexicographic
index).  For p = 2 the root is i throughout, so a sign (-1)^k is exponent 2k.

All checks are exact.  With unnormalised rows u1, u2 the normalised overlap
condition |(u1, u2)|^2 = 1/N reads  N * |z|^2 == (u1,u1) * (u2,u2)  for
z = (u1, u2), an identity in Z[root].
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field, replace
from typing import Sequence

import numpy as np

from .cyclo import CycInt, Root, counts_canonical, counts_norm, exponent_counts, root_power
from .errors import DimensionMismatch, NotIsotropic, NotSingular, RootMismatch, WrongCharacteristic
from .families import ExponentFamily
from .geometry import SpreadSet, Subspace
from .linalg import vspace
from .report import CheckReport

STANDARD = "inf"


def _base_prime(root: Root) -> int:
    return 2 if root.kind == "i" else root.order


def _dim_to_n(N: int, p: int) -> int:
    n, m = 0, 1
    while m < N:
        m *= p
        n += 1
    if m != N:
        raise DimensionMismatch(f"dimension {N} is not a power of {p}")
    return n


def _zexp(root: Root, dots: np.ndarray) -> np.ndarray:
    """Exponent of zeta^dots in the root's encoding (zeta = -1 = i^2 for p = 2)."""
    return (2 * dots) % 4 if root.kind == "i" else dots % root.order


@dataclass(frozen=True, eq=False)
class Orthoframe:
    dim: int
    root: Root
    label: str = ""
    table: np.ndarray | None = None    # None: the standard frame

    @property
    def kind(self) -> str:
        return "standard" if self.table is None else "exponent"

    def exponents(self) -> np.ndarray:
        if self.table is not None:
            return self.table
        t = np.full((self.dim, self.dim), -1, dtype=np.int64)
        np.fill_diagonal(t, 0)
        return t

    @property
    def full_support(self) -> bool:
        return self.table is not None and bool((self.table >= 0).all())

    def is_real(self) -> bool:
        t = self.exponents()
        allowed = (-1, 0, 2) if self.root.kind == "i" else (-1, 0)
        return bool(np.isin(t, allowed).all())

    def vectors(self) -> list[list[CycInt]]:
        zero = CycInt.integer(self.root, 0)
        return [[zero if e < 0 else root_power(self.root, int(e)) for e in row]
                for row in self.exponents()]

    def canonical_rows(self) -> list[bytes]:
        """One key per row; two rows span the same 1-space iff their keys agree."""
        t = self.exponents()
        mask = t >= 0
        first = mask.argmax(axis=1)
        base = t[np.arange(len(t)), first]
        canon = np.where(mask, (t - base[:, None]) % self.root.order, -1).astype(np.int16)
        return [r.tobytes() for r in canon]


def standard_frame(N: int, root: Root) -> Orthoframe:
    return Orthoframe(N, root, STANDARD, None)


@dataclass
class MubSet:
    dim: int
    root: Root
    frames: list[Orthoframe]
    provenance: dict = dc_field(default_factory=dict)

    @property
    def p(self) -> int:
        return _base_prime(self.root)

    @property
    def n(self) -> int:
        return _dim_to_n(self.dim, self.p)

    def is_real(self) -> bool:
        return all(f.is_real() for f in self.frames)

    @property
    def bound(self) -> int:
        """N + 1 in C^N, N/2 + 1 when every vector is real."""
        return self.dim // 2 + 1 if self.is_real() else self.dim + 1

    @property
    def complete(self) -> bool:
        return len(self.frames) == self.bound

    def with_frames(self, frames: Sequence[Orthoframe]) -> "MubSet":
        return replace(self, frames=list(frames))


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------

def _quad_values(V, mat, modulus: int) -> np.ndarray:
    m = np.asarray(mat, dtype=np.int64)
    return np.einsum("vi,ij,vj->v", V.digits, m, V.digits) % modulus


def frames_from_spreadset_odd(K: SpreadSet, provenance: dict | None = None) -> MubSet:
    """F_inf and, per M, rows a -> sum_v zeta^(a.v + v.Mv/2) e_v."""
    if K.p == 2:
        raise WrongCharacteristic("odd-characteristic construction called with p = 2")
    p, N = K.p, K.p ** K.n
    V = vspace(p, K.n)
    root = Root.zeta(p)
    dots = V.dot_table()
    inv2 = pow(2, -1, p)
    frames = [standard_frame(N, root)]
    for k, M in enumerate(K.matrices):
        theta = _quad_values(V, M, p) * inv2 % p
        frames.append(Orthoframe(N, root, f"M{k}", (dots + theta[None, :]) % p))
    return MubSet(N, root, frames, {"construction": "spreadset", **(provenance or {})})


def frames_from_spreadset_binary(K: SpreadSet, provenance: dict | None = None) -> MubSet:
    """F_inf and, per M, rows a -> sum_v i^(2 a.v + v.Mv) e_v with 0/1 entries read in Z_4."""
    if K.p != 2:
        raise WrongCharacteristic("binary construction called with odd p")
    N = 2 ** K.n
    V = vspace(2, K.n)
    root = Root.i()
    dots2 = (2 * (V.digits @ V.digits.T)) % 4
    frames = [standard_frame(N, root)]
    for k, M in enumerate(K.matrices):
        theta = _quad_values(V, M, 4)
        frames.append(Orthoframe(N, root, f"M{k}", (dots2 + theta[None, :]) % 4))
    return MubSet(N, root, frames, {"construction": "spreadset", **(provenance or {})})


def frames_from_spreadset(K: SpreadSet, provenance: dict | None = None) -> MubSet:
    return (frames_from_spreadset_binary if K.p == 2 else frames_from_spreadset_odd)(K, provenance)


def frames_from_exponents(F: ExponentFamily) -> MubSet:
    N = F.N
    frames = [standard_frame(N, F.root)]
    for k, label in enumerate(F.labels):
        frames.append(Orthoframe(N, F.root, label, F.table(k)))
    return MubSet(N, F.root, frames, dict(F.meta))


def relabel_columns(frame: Orthoframe, perm: Sequence[int]) -> Orthoframe:
    """New frame whose column perm[v] carries old column v."""
    perm = np.asarray(perm)
    t = frame.exponents()
    out = np.empty_like(t)
    out[:, perm] = t
    return Orthoframe(frame.dim, frame.root, frame.label, out)


# ----------------------------------------------------------------------
# Weyl operators and the eigenframe oracle
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class WeylOperator:
    kind: str                 # "X": e_v -> e_(v+b);  "Z": e_v -> zeta^(b.v) e_v
    b: tuple[int, ...]

    def __str__(self):
        return f"{self.kind}({''.join(map(str, self.b))})"


def standard_generators(p: int, n: int) -> list[WeylOperator]:
    eps = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return [WeylOperator("X", e) for e in eps] + [WeylOperator("Z", e) for e in eps]


def apply_weyl(w: WeylOperator, F: Orthoframe) -> Orthoframe:
    p = _base_prime(F.root)
    n = _dim_to_n(F.dim, p)
    if len(w.b) != n:
        raise DimensionMismatch(f"operator on Z_{p}^{len(w.b)} applied to a frame of C^{F.dim}")
    V = vspace(p, n)
    t = F.exponents()
    b = V.index(w.b)
    if w.kind == "X":
        new = t[:, V.translate(V.index([-x for x in w.b]))]   # new[w] = old[w - b]
    elif w.kind == "Z":
        add = _zexp(F.root, V.dot(b))
        new = np.where(t < 0, -1, (t + add[None, :]) % F.root.order)
    else:
        raise ValueError(f"unknown Weyl operator {w.kind!r}")
    return Orthoframe(F.dim, F.root, F.label, new)


CONTEXTS = ("complex-odd-p", "complex-binary", "real-binary")


def eigenframe(A: Subspace, context: str) -> Orthoframe:
    """Joint eigenlines of the abelian group lifted from A, by character projection.

    The lift of (a|b) is X(a)Z(b); for p = 2 it is i^(a.b) X(a)Z(b), which has
    order 2 and lies in the group generated with i*I.  Seeds e_0, e_1, ... are
    projected onto each character until a nonzero vector appears.
    """
    if context not in CONTEXTS:
        raise ValueError(f"context must be one of {CONTEXTS}")
    p = A.p
    if (p == 2) != (context != "complex-odd-p"):
        raise WrongCharacteristic(f"context {context} does not match p = {p}")
    if A.length % 2 or A.dim != A.length // 2:
        raise DimensionMismatch(f"need an n-space of Z_p^(2n), got dim {A.dim} in {A.length}")
    n = A.dim
    if context == "real-binary":
        w = A.singularity_witness()
        if w:
            raise NotSingular(f"subspace is not totally singular: {w}")
    elif A.isotropy_witness():
        raise NotIsotropic(f"subspace is not totally isotropic: {A.isotropy_witness()}")
    root = Root.zeta(p) if p != 2 else Root.i()
    q = root.order
    V = vspace(p, n)
    N = V.size

    # enumerate the group: element c = prod_k g_k^(c_k), stored as phase * X(a) Z(b)
    gens = []
    for row in A.basis:
        a, b = row[:n], row[n:]
        phase = (sum(x * y for x, y in zip(a, b)) % 2) if p == 2 else 0
        gens.append((phase, np.array(a), np.array(b)))
    phases = np.zeros(1, dtype=np.int64)
    avecs = np.zeros((1, n), dtype=np.int64)
    bvecs = np.zeros((1, n), dtype=np.int64)
    for phase_k, ak, bk in gens:
        ph, av, bv = [phases], [avecs], [bvecs]
        for _ in range(1, p):
            # (phi, a, b)(phi_k, a_k, b_k) = (phi + phi_k + zexp(b.a_k), a + a_k, b + b_k)
            prev_ph, prev_a, prev_b = ph[-1], av[-1], bv[-1]
            ph.append((prev_ph + phase_k + _zexp(root, prev_b @ ak)) % q)
            av.append((prev_a + ak) % p)
            bv.append((prev_b + bk) % p)
        # coefficient vectors c are ordered with the newest generator fastest
        phases = np.stack(ph, axis=1).reshape(-1)
        avecs = np.stack(av, axis=1).reshape(-1, n)
        bvecs = np.stack(bv, axis=1).reshape(-1, n)
    a_idx = V.indices(avecs)
    char = _zexp(root, V.dot_table())   # char[t, c]: exponent of chi_t at element c

    rows, seen = [], set()
    for t in range(N):
        for s in range(N):
            exps = (phases + _zexp(root, bvecs @ V.digits[s]) - char[t]) % q
            target = V.indices(V.digits[a_idx] + V.digits[s])
            counts = np.zeros((N, q), dtype=np.int64)
            np.add.at(counts, (target, exps), 1)
            coeffs = counts_canonical(root, counts)
            if not coeffs.any():
                continue
            row = np.full(N, -1, dtype=np.int64)
            mult = None
            for v in np.flatnonzero(coeffs.any(axis=1)):
                m, e = CycInt.make(root, coeffs[v].tolist()).as_root_multiple()
                assert mult in (None, m), "projection is not a scaled unimodular vector"
                mult, row[v] = m, e
            fr = Orthoframe(N, root, "", row[None, :])
            key = fr.canonical_rows()[0]
            if key not in seen:
                seen.add(key)
                rows.append(row)
            break
    assert len(rows) == N, f"found {len(rows)} eigenlines, expected {N}"
    return Orthoframe(N, root, "eig", np.array(rows))


# ----------------------------------------------------------------------
# comparisons and verification
# ----------------------------------------------------------------------

def to_fourth_root(F: Orthoframe) -> Orthoframe:
    """Re-encode a frame over zeta(2) = -1 in powers of i."""
    if F.root.kind == "i":
        return F
    if F.root.order != 2:
        raise RootMismatch(f"{F.root} does not embed in Z[i]")
    t = None if F.table is None else np.where(F.table < 0, -1, 2 * F.table)
    return Orthoframe(F.dim, Root.i(), F.label, t)


def frames_equal_as_sets(F1: Orthoframe, F2: Orthoframe) -> bool:
    if F1.dim != F2.dim:
        raise DimensionMismatch(f"frames of C^{F1.dim} and C^{F2.dim}")
    if {F1.root, F2.root} == {Root.zeta(2), Root.i()}:
        F1, F2 = to_fourth_root(F1), to_fourth_root(F2)
    if F1.root != F2.root:
        raise RootMismatch(f"{F1.root} vs {F2.root}")
    return sorted(F1.canonical_rows()) == sorted(F2.canonical_rows())


def _overlap_counts(t1: np.ndarray, t2: np.ndarray, q: int) -> np.ndarray:
    """counts[r, s, j] = #{v : both nonzero and t1[r,v] - t2[s,v] == j mod q}."""
    out = np.empty((len(t1), len(t2), q), dtype=np.int64)
    step = max(1, 2 ** 20 // (t2.size or 1))
    for lo in range(0, len(t1), step):
        a = t1[lo:lo + step]
        diff = (a[:, None, :] - t2[None, :, :]) % q
        valid = (a[:, None, :] >= 0) & (t2[None, :, :] >= 0)
        out[lo:lo + step] = exponent_counts(diff, q, valid)
    return out


def _check_self(F: Orthoframe):
    """Witness (r, s) of two non-orthogonal rows, or ('empty', r); None if F is an orthoframe."""
    t = F.exponents()
    support = (t >= 0).sum(axis=1)
    if (support == 0).any():
        return ("empty", int(np.flatnonzero(support == 0)[0]))
    z = counts_canonical(F.root, _overlap_counts(t, t, F.root.order))
    off = z.any(axis=-1)
    np.fill_diagonal(off, False)
    if off.any():
        r, s = map(int, np.argwhere(off)[0])
        return ("orthogonality", r, s, z[r, s].tolist())
    return None


def _check_pair(F: Orthoframe, G: Orthoframe, N: int):
    tF, tG = F.exponents(), G.exponents()
    norm2 = counts_norm(F.root, _overlap_counts(tF, tG, F.root.order))
    nF, nG = (tF >= 0).sum(axis=1), (tG >= 0).sum(axis=1)
    ok = (N * norm2[..., 0] == nF[:, None] * nG[None, :]) & ~norm2[..., 1:].any(axis=-1)
    if not ok.all():
        r, s = map(int, np.argwhere(~ok)[0])
        return ("unbiased", r, s, norm2[r, s].tolist())
    return None


def _run(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def verify_mub_set(M: MubSet, mode: str = "all-pairs", threads: int = 1) -> CheckReport:
    """Exact verification: every frame an orthoframe, every cross pair unbiased, size within bound."""
    if mode not in ("all-pairs", "difference-class"):
        raise ValueError(f"unknown mode {mode!r}")
    name = "mubset"
    N, q = M.dim, M.root.order
    for i, F in enumerate(M.frames):
        t = F.exponents()
        if F.dim != N or t.shape != (N, N) or F.root != M.root:
            return CheckReport(name, False, [f"frame {i} ({F.label}) has wrong shape or root"],
                               witness=("shape", F.label))
        if t.min() < -1 or t.max() >= q:
            return CheckReport(name, False, [f"frame {i} ({F.label}) has exponents outside [0,{q})"],
                               witness=("range", F.label))
    count, bound = len(M.frames), M.bound
    details = [f"N={N} frames={count} bound={bound} mode={mode}"]
    if count > bound:
        return CheckReport(name, False, details + [f"{count} frames exceed the bound {bound}"],
                           witness=("bound", count, bound))
    if mode == "all-pairs":
        rep = _verify_all_pairs(M, threads)
    else:
        rep = _verify_difference_classes(M, threads)
    rep.details = details + rep.details
    if rep.passed:
        rep.details.append("complete" if M.complete else "incomplete")
    rep.data["complete"] = M.complete
    return rep


def _verify_all_pairs(M: MubSet, threads: int) -> CheckReport:
    name = "mubset"
    frames = M.frames
    selfs = _run(_check_self, frames, threads)
    for F, w in zip(frames, selfs):
        if w:
            return CheckReport(name, False, [f"frame {F.label} is not an orthoframe: {w}"],
                               witness=(F.label, F.label) + w)
    pairs = list(itertools.combinations(range(len(frames)), 2))
    res = _run(lambda ij: _check_pair(frames[ij[0]], frames[ij[1]], M.dim), pairs, threads)
    for (i, j), w in zip(pairs, res):
        if w:
            return CheckReport(name, False,
                               [f"frames {frames[i].label} and {frames[j].label} not unbiased: rows {w[1]},{w[2]} "
                                f"|z|^2 = {w[3]}"],
                               witness=(frames[i].label, frames[j].label) + w)
    return CheckReport(name, True, [f"{len(frames)} orthoframes, {len(pairs)} pairs unbiased (exact)"])


def _verify_difference_classes(M: MubSet, threads: int) -> CheckReport:
    """Pairs with a-linear rows E(a, v) = L[a, v] + theta(v) share inner products by class.

    For rows a, a' of frames F, G the inner product is sum_v root^(L[a-a', v] + delta(v)),
    delta = theta_F - theta_G, so it depends only on (a - a', delta).
    """
    name = "mubset"
    N, q, root = M.dim, M.root.order, M.root
    p = M.p
    V = vspace(p, M.n)
    std = [F for F in M.frames if F.kind == "standard"]
    expo = [F for F in M.frames if F.kind != "standard"]
    for F in expo:
        if not F.full_support:
            return CheckReport(name, False, [f"frame {F.label} has zero entries; use all-pairs mode"],
                               witness=("shape", F.label))
    details = []
    # several standard frames: compare them directly
    for F, G in itertools.combinations(std, 2):
        w = _check_pair(F, G, N)
        if w:
            return CheckReport(name, False, [f"standard frames {F.label}, {G.label} not unbiased"],
                           witness=(F.label, G.label) + w)
    if not expo:
        return CheckReport(name, True, ["no exponent frames"])
    L = (expo[0].table - expo[0].table[0][None, :]) % q
    e = V.basis_indices
    predicted = (V.digits @ L[e]) % q
    if not np.array_equal(predicted, L):
        r = int(np.flatnonzero((predicted != L).any(axis=1))[0])
        return CheckReport(name, False, [f"row pairing of {expo[0].label} is not additive (row {r})"],
                           witness=("shape", expo[0].label, r))
    thetas = []
    for F in expo:
        theta = F.table[0]
        bad = (L + theta[None, :]) % q != F.table
        if bad.any():
            r, v = map(int, np.argwhere(bad)[0])
            return CheckReport(name, False, [f"frame {F.label} row {r} col {v} breaks the a-linear shape"],
                               witness=("shape", F.label, r, v))
        thetas.append(theta)
    thetas = np.array(thetas)
    details.append(f"a-linear shape verified on {len(expo)} frames")

    # classes: (self?, delta) -> first pair realising it
    classes: dict[tuple[bool, bytes], tuple[int, int]] = {}
    for i in range(len(expo)):
        classes.setdefault((True, bytes(len(thetas[i]) * 8)), (i, i))
        deltas = (thetas[i][None, :] - thetas[i + 1:]) % q
        for off, d in enumerate(deltas):
            classes.setdefault((False, d.astype(np.int64).tobytes()), (i, i + 1 + off))

    def check_class(item):
        (is_self, key), (i, j) = item
        delta = np.frombuffer(key, dtype=np.int64)
        counts = exponent_counts((L + delta[None, :]) % q, q)
        if is_self:
            z = counts_canonical(root, counts)
            want = np.zeros_like(z)
            want[0, 0] = N
            bad = (z != want).any(axis=1)
            if bad.any():
                d = int(np.flatnonzero(bad)[0])
                return ("orthogonality", d, z[d].tolist())
            return None
        norm2 = counts_norm(root, counts)
        bad = (norm2[:, 0] != N) | norm2[:, 1:].any(axis=1)
        if bad.any():
            d = int(np.flatnonzero(bad)[0])
            return ("unbiased", d, norm2[d].tolist())
        return None

    items = sorted(classes.items(), key=lambda kv: kv[1])
    results = _run(check_class, items, threads)
    for ((is_self, _), (i, j)), w in zip(items, results):
        if w:
            F, G = expo[i], expo[j]
            d = V.vector(w[1])
            return CheckReport(name, False,
                               [f"class d={''.join(map(str, d))} frames {F.label},{G.label}: {w[0]} fails, "
                                f"value {w[2]}"],
                               witness=(F.label, G.label, w[0], d, w[2]))
    npairs = len(expo) * (len(expo) - 1) // 2
    details.append(f"{len(items)} difference classes cover {npairs} exponent pairs and {len(expo)} frames; "
                   f"{len(std) * len(expo)} standard-vs-exponent pairs are single-term")
    return CheckReport(name, True, details)
