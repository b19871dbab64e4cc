"""Explicit constructions: Desarguesian, Kantor (binary), BKL and planar-function families.

Field-based families come in two shapes.  Spread sets (symmetric matrices)
are obtained by writing the trace form T(xy) in a self-dual basis, where it
becomes the dot product.  Exponent families keep the trace form and give,
for each label b, the exponent table E_b(a, v) = T(a v) + theta_b(v); rows a
and columns v are indexed by field codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from . import linalg as la
from .cyclo import Root
from .errors import BadDegree, BadParameters, NotPlanar
from .geometry import SpreadSet, SymplecticSpread, graph, vertical
from .gf import Field, is_planar, self_dual_basis


@dataclass
class ExponentFamily:
    p: int
    n: int
    root: Root
    labels: list[str]
    pairing: np.ndarray          # (N, N): a-linear part, row a
    thetas: np.ndarray           # (len(labels), N): theta_b(v)
    meta: dict = dc_field(default_factory=dict)
    field: Field | None = None
    f_table: np.ndarray | None = None   # planar function, when there is one

    @property
    def N(self) -> int:
        return self.p ** self.n

    def table(self, k: int) -> np.ndarray:
        return (self.pairing + self.thetas[k][None, :]) % self.root.order

    def exponent(self, k: int, a: int, v: int) -> int:
        return int((self.pairing[a, v] + self.thetas[k, v]) % self.root.order)

    def quadratic_matrix(self, k: int) -> la.Matrix | None:
        """Symmetric S with theta_k(v) = v.Sv/2 in coordinates, or None if theta_k is not quadratic."""
        if self.p == 2:
            return None
        V = la.vspace(self.p, self.n)
        theta = self.thetas[k]
        e = V.basis_indices
        add = lambda i, j: V.index(V.digits[i] + V.digits[j])
        S = tuple(tuple(int(theta[add(e[i], e[j])] - theta[e[i]] - theta[e[j]]) % self.p
                        for j in range(self.n)) for i in range(self.n))
        inv2 = pow(2, -1, self.p)
        q = np.einsum("vi,ij,vj->v", V.digits, np.array(S), V.digits) * inv2 % self.p
        if not np.array_equal(q, theta % self.p):
            return None
        return S


def _trace_pairing(F: Field) -> np.ndarray:
    return F.trace_table[F.mul_table]


def _labels(F: Field) -> list[str]:
    return [f"b={c}" for c in range(F.order)]


def _field_meta(F: Field) -> dict:
    return {"p": F.p, "n": F.n, "modulus": ",".join(map(str, F.modulus))}


# ----------------------------------------------------------------------

def desarguesian(p: int, n: int, field: Field | None = None) -> SpreadSet:
    """Spread set {x -> mx : m in GF(p^n)} written in a self-dual basis.

    Raises NoSelfDualBasis for odd p with even n; use desarguesian_exponents there.
    """
    F = field or Field(p, n)
    basis = self_dual_basis(F)
    bcodes = [b.code for b in basis.vectors]
    mul, tr = F.mul_table, F.trace_table
    prod = mul[np.ix_(bcodes, bcodes)]                # beta_i beta_j
    mats = []
    for m in range(F.order):
        mats.append(tuple(tuple(int(x) for x in row) for row in tr[mul[m][prod]]))
    return SpreadSet(p, n, tuple(mats))


def kantor_binary(n: int, field: Field | None = None) -> SymplecticSpread:
    """Members x = 0 and y = m^2 x + m T(x) + T(m x), m in GF(2^n); n odd, n > 3."""
    if n % 2 == 0 or n <= 3:
        raise BadDegree(f"Kantor spread needs odd n > 3, got {n}")
    F = field or Field(2, n)
    basis = self_dual_basis(F)
    beta = basis.vectors
    members = [vertical(2, n)]
    for m in F.elements():
        images = [m * m * x + m * x.trace() + (m * x).trace() for x in beta]
        # column j = coordinates of L_m(beta_j)
        mat = tuple(tuple((images[j] * beta[i]).trace() for j in range(n)) for i in range(n))
        members.append(graph(mat, 2))
    return SymplecticSpread(2, n, tuple(members))


def desarguesian_exponents(p: int, n: int, field: Field | None = None) -> ExponentFamily:
    """E_m(a, x) = T(a x) + T(m x^2)/2 over GF(p^n), p odd."""
    if p == 2:
        raise BadParameters("trace-form exponents need odd p")
    F = field or Field(p, n)
    inv2 = pow(2, -1, p)
    sq = F.pow_table(2)
    thetas = F.trace_table[F.mul_table[:, sq]] * inv2 % p
    return ExponentFamily(p, n, Root.zeta(p), _labels(F), _trace_pairing(F), thetas,
                          {"family": "desarguesian", **_field_meta(F)}, F)


def bkl_exponents(p: int, n: int, s: int, field: Field | None = None) -> ExponentFamily:
    """E_b(a, x) = T(a x) + T(b x^(p^(n-s)+1) + b^(p^s) x^(p^s+1))/2."""
    if p == 2 or n % 2 == 0 or not (1 <= s and 2 * s < n) or gcd(s, n) != 1:
        raise BadParameters(f"BKL needs odd p, odd n, 1 <= s < n/2, gcd(s, n) = 1; got p={p} n={n} s={s}")
    F = field or Field(p, n)
    inv2 = pow(2, -1, p)
    x1 = F.pow_table(p ** (n - s) + 1)
    x2 = F.pow_table(p ** s + 1)
    bfrob = F.pow_table(p ** s)
    mul = F.mul_table
    inner = F.add_table[mul[:, x1], mul[bfrob][:, x2]]
    thetas = F.trace_table[inner] * inv2 % p
    return ExponentFamily(p, n, Root.zeta(p), _labels(F), _trace_pairing(F), thetas,
                          {"family": "bkl", "s": s, **_field_meta(F)}, F)


def planar_exponents(n: int, k: int, field: Field | None = None) -> ExponentFamily:
    """E_b(a, v) = T(a v) + T(b f(v)) with f(x) = x^((3^k+1)/2) on GF(3^n)."""
    if n % 2 == 0 or n < 5:
        raise BadParameters(f"planar family needs odd n >= 5, got {n}")
    if gcd(k, 2 * n) != 1 or k % (2 * n) in (1, 2 * n - 1):
        raise BadParameters(f"need gcd(k, 2n) = 1 and k != +-1 mod 2n; got n={n} k={k}")
    F = field or Field(3, n)
    f = F.pow_table((3 ** k + 1) // 2)
    res = is_planar(F, f)
    if not res:
        raise NotPlanar(f"x^((3^{k}+1)/2) fails at a={res.a}, b={res.b}")
    thetas = F.trace_table[F.mul_table[:, f]]
    return ExponentFamily(3, n, Root.zeta(3), _labels(F), _trace_pairing(F), thetas,
                          {"family": "planar", "k": k, **_field_meta(F)}, F, f)
