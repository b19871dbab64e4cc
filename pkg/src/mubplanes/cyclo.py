"""Exact arithmetic in Z[zeta_p] (p odd prime) and Z[i].

Frame vectors have entries that are roots of unity, so every inner product
is a sum of root powers.  We never normalise: orthogonality is ``z == 0``
and unbiasedness is a statement about the rational integer ``z * conj(z)``.

Canonical forms
  zeta(p): coefficients of 1, zeta, ..., zeta^(p-1) with the last one zero
           (subtract coeffs[p-1] everywhere, using 1 + zeta + ... = 0).
  i:       coefficients of 1 and i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import LengthMismatch, RootMismatch


@dataclass(frozen=True)
class Root:
    """A primitive root of unity: ``zeta`` of prime order p, or ``i``."""

    kind: str   # "zeta" | "i"
    order: int  # p, or 4 for i

    @classmethod
    def zeta(cls, p: int) -> "Root":
        return cls("zeta", p)

    @classmethod
    def i(cls) -> "Root":
        return cls("i", 4)

    @property
    def width(self) -> int:
        """Length of a canonical coefficient vector."""
        return 2 if self.kind == "i" else self.order

    def __str__(self):
        return "i" if self.kind == "i" else f"zeta(p={self.order})"


FOURTH = Root.i()


def canonical(root: Root, coeffs: Sequence[int]) -> tuple[int, ...]:
    if root.kind == "i":
        if len(coeffs) == 4:  # counts of 1, i, -1, -i
            return (coeffs[0] - coeffs[2], coeffs[1] - coeffs[3])
        if len(coeffs) != 2:
            raise LengthMismatch(f"Z[i] element needs 2 coefficients, got {len(coeffs)}")
        return (int(coeffs[0]), int(coeffs[1]))
    if len(coeffs) != root.order:
        raise LengthMismatch(f"Z[zeta_{root.order}] element needs {root.order} coefficients")
    last = coeffs[-1]
    return tuple(int(c - last) for c in coeffs)


@dataclass(frozen=True)
class CycInt:
    root: Root
    coeffs: tuple[int, ...]

    @classmethod
    def make(cls, root: Root, coeffs: Sequence[int]) -> "CycInt":
        return cls(root, canonical(root, coeffs))

    @classmethod
    def integer(cls, root: Root, k: int) -> "CycInt":
        c = [0] * root.width
        c[0] = k
        return cls.make(root, c)

    @classmethod
    def from_counts(cls, root: Root, counts: Sequence[int]) -> "CycInt":
        """The sum  sum_j counts[j] * root^j  (len(counts) == root.order)."""
        return cls.make(root, list(counts))

    def _check(self, other: "CycInt"):
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.root != self.root:
            raise RootMismatch(f"{self.root} vs {other.root}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CycInt.make(self.root, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CycInt.make(self.root, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CycInt.make(self.root, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt.make(self.root, [other * a for a in self.coeffs])
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.root.kind == "i":
            a, b = self.coeffs
            c, d = other.coeffs
            return CycInt(self.root, (a * c - b * d, a * d + b * c))
        p = self.root.order
        out = [0] * p
        for j, x in enumerate(self.coeffs):
            if x:
                for k, y in enumerate(other.coeffs):
                    out[(j + k) % p] += x * y
        return CycInt.make(self.root, out)

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        if self.root.kind == "i":
            return CycInt(self.root, (self.coeffs[0], -self.coeffs[1]))
        p = self.root.order
        out = [0] * p
        for j, x in enumerate(self.coeffs):
            out[(-j) % p] += x
        return CycInt.make(self.root, out)

    def norm(self) -> "CycInt":
        """z * conj(z)."""
        return self * self.conj()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_integer(self) -> int | None:
        """The rational integer equal to self, or None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def as_root_multiple(self) -> tuple[int, int] | None:
        """(m, e) with self == m * root^e and m > 0, or None (zero is None)."""
        for e in range(self.root.order):
            unit = root_power(self.root, e)
            k = next((j for j, c in enumerate(unit.coeffs) if c), None)
            m, r = divmod(self.coeffs[k], unit.coeffs[k])
            if m > 0 and r == 0 and unit * m == self:
                return m, e
        return None

    def __repr__(self):
        return f"CycInt({self.root}, {list(self.coeffs)})"


def root_power(root: Root, e: int) -> CycInt:
    c = [0] * root.order
    c[e % root.order] = 1
    return CycInt.from_counts(root, c)


def hermitian_inner(v: Sequence[CycInt], w: Sequence[CycInt]) -> CycInt:
    """sum_j v_j * conj(w_j)."""
    if len(v) != len(w):
        raise LengthMismatch(f"vectors of length {len(v)} and {len(w)}")
    if not v:
        raise LengthMismatch("empty vectors")
    acc = CycInt.integer(v[0].root, 0)
    for a, b in zip(v, w):
        acc = acc + a * b.conj()
    return acc


def squared_magnitude_is(z: CycInt, target: int) -> bool:
    return z.norm() == CycInt.integer(z.root, target)


# ----------------------------------------------------------------------
# vectorised forms over exponent histograms
# ----------------------------------------------------------------------

def counts_canonical(root: Root, counts: np.ndarray) -> np.ndarray:
    """Canonical coefficients of sum_j counts[..., j] root^j, shape (..., width)."""
    counts = np.asarray(counts, dtype=np.int64)
    if root.kind == "i":
        return np.stack([counts[..., 0] - counts[..., 2], counts[..., 1] - counts[..., 3]], axis=-1)
    return counts - counts[..., -1:]


def counts_norm(root: Root, counts: np.ndarray) -> np.ndarray:
    """Canonical coefficients of |z|^2 for z = sum_j counts[..., j] root^j."""
    counts = np.asarray(counts, dtype=np.int64)
    if root.kind == "i":
        re = counts[..., 0] - counts[..., 2]
        im = counts[..., 1] - counts[..., 3]
        return np.stack([re * re + im * im, np.zeros_like(re)], axis=-1)
    p = root.order
    w = np.stack([(counts * np.roll(counts, t, axis=-1)).sum(axis=-1) for t in range(p)], axis=-1)
    return w - w[..., -1:]


def exponent_counts(diff: np.ndarray, order: int, valid: np.ndarray | None = None) -> np.ndarray:
    """Histogram of exponents along the last axis: out[..., j] = #{k : diff[..., k] == j}."""
    out = np.stack([(diff == j) if valid is None else ((diff == j) & valid)
                    for j in range(order)], axis=-1)
    return out.sum(axis=-2, dtype=np.int64)
