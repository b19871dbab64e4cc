"""Exact linear algebra over Z_p, and index arithmetic on Z_p^n.

Small matrices are tuples of int tuples.  ``rank_large`` handles the
incidence matrices of planes (bit-packed over GF(2), numpy otherwise).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

import numpy as np

Matrix = tuple[tuple[int, ...], ...]


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form over Z_p; zero rows dropped."""
    m = [[x % p for x in r] for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[0])


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a, b, p: int) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a)


def matvec(a, v, p: int) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def inverse(a: Sequence[Sequence[int]], p: int) -> Matrix | None:
    """Inverse over Z_p, or None when singular."""
    n = len(a)
    aug = [list(row) + list(e) for row, e in zip(a, identity(n))]
    red, piv = rref(aug, p)
    if len(red) < n or piv[n - 1] != n - 1:
        return None
    return tuple(tuple(row[n:]) for row in red)


def is_nonsingular(a: Sequence[Sequence[int]], p: int) -> bool:
    return rank(a, p) == len(a)


def is_symmetric(a: Sequence[Sequence[int]]) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def sub(a, b, p: int) -> Matrix:
    return tuple(tuple((x - y) % p for x, y in zip(r, s)) for r, s in zip(a, b))


# ----------------------------------------------------------------------
# ranks of large matrices
# ----------------------------------------------------------------------

def _rank_gf2_bits(vectors: list[int]) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def rank_large(mat: np.ndarray, p: int) -> int:
    """Rank over Z_p of an integer matrix (rows x cols)."""
    mat = np.asarray(mat) % p
    if p == 2:
        packed = np.packbits(mat.astype(np.uint8), axis=1)
        return _rank_gf2_bits([int.from_bytes(r.tobytes(), "big") for r in packed])
    a = mat.astype(np.int64).copy()
    nrows, ncols = a.shape
    r = 0
    inv = [0] + [pow(x, -1, p) for x in range(1, p)]
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * inv[int(a[r, c])] % p
        below = np.flatnonzero(a[r + 1:, c]) + r + 1
        if below.size:
            a[below] = (a[below] - np.outer(a[below, c], a[r])) % p
        r += 1
    return r


# ----------------------------------------------------------------------
# Z_p^n with lexicographic indexing
# ----------------------------------------------------------------------

class VSpace:
    """Z_p^n; vector v has index sum_i v_i p^(n-1-i) (lexicographic order)."""

    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.size = p ** n
        self.digits = np.array(list(itertools.product(range(p), repeat=n)),
                               dtype=np.int64).reshape(self.size, n)
        self.weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def index(self, v: Sequence[int]) -> int:
        return int(np.dot(np.asarray(v, dtype=np.int64) % self.p, self.weights))

    def vector(self, k: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.digits[k])

    def indices(self, vecs: np.ndarray) -> np.ndarray:
        return (np.asarray(vecs) % self.p) @ self.weights

    @property
    def basis_indices(self) -> list[int]:
        return [self.index([int(i == j) for j in range(self.n)]) for i in range(self.n)]

    def translate(self, b: int) -> np.ndarray:
        """Index of v + b for every v."""
        return self.indices(self.digits + self.digits[b])

    def neg(self) -> np.ndarray:
        return self.indices(-self.digits)

    def dot(self, b: int) -> np.ndarray:
        """b . v mod p for every v."""
        return (self.digits @ self.digits[b]) % self.p

    def dot_table(self) -> np.ndarray:
        return (self.digits @ self.digits.T) % self.p

    def apply(self, mat: Sequence[Sequence[int]]) -> np.ndarray:
        """Index of M v for every v."""
        m = np.asarray(mat, dtype=np.int64)
        return self.indices(self.digits @ m.T)


@lru_cache(maxsize=32)
def vspace(p: int, n: int) -> VSpace:
    return VSpace(p, n)
