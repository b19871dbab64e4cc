"""Arithmetic in GF(p^n) with elements kept in the power basis.

Elements are addressed by an integer *code*: the coefficient vector
``(c0, c1, ..., c_{n-1})`` (constant term first) read as a base-p numeral
with ``c0`` most significant.  Codes therefore enumerate the field in
lexicographic order of coefficient vectors, which is the ordering used for
frame columns, plane points and file formats throughout the package.

Scalar operations work on codes; the ``*_table`` properties give numpy
lookup tables for the vectorised paths.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    MalformedTable,
    NonPrime,
    NoSelfDualBasis,
    ReduciblePolynomial,
    TooLarge,
)

TABLE_LIMIT = 4096


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# ----------------------------------------------------------------------
# polynomials over Z_p: lists of coefficients, constant term first
# ----------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _psub(a, b, p):
    m = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(m)]
    return _trim(out)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmod(a, m, p):
    a = _trim([c % p for c in a])
    m = _trim(list(m))
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppow(base, e, m, p):
    result, base = [1], _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over Z_p."""
    f = _trim([c % p for c in poly])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(n):
        h = _ppow(h, p, f, p)
    if _psub(h, _pmod(x, f, p), p):
        return False
    for q in prime_factors(n):
        h = x
        for _ in range(n // q):
            h = _ppow(h, p, f, p)
        if len(_pgcd(_psub(h, x, p), f, p)) > 1:
            return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n (constant term first)."""
    for low in itertools.product(range(p), repeat=n):
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ReduciblePolynomial(f"no irreducible polynomial of degree {n} over Z_{p}")


# ----------------------------------------------------------------------

class Field:
    """GF(p^n) = Z_p[t]/(modulus)."""

    def __init__(self, p: int, n: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if n < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {n}")
        if modulus is None:
            modulus = default_modulus(p, n)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise DegreeMismatch(f"modulus must be monic of degree {n}: {modulus}")
            if any(not 0 <= c < p for c in modulus):
                raise DegreeMismatch(f"modulus coefficients must lie in [0, {p})")
            if not is_irreducible(modulus, p):
                raise ReduciblePolynomial(f"{modulus} is reducible over Z_{p}")
        self.p = p
        self.n = n
        self.modulus = tuple(modulus)
        self.order = p ** n

    def __repr__(self):
        return f"Field(p={self.p}, n={self.n}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.n, self.modulus) == (
            other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __len__(self):
        return self.order

    # -- serialization --------------------------------------------------
    def to_line(self) -> str:
        mod = ",".join(str(c) for c in self.modulus)
        return f"FIELD p={self.p} n={self.n} modulus={mod}"

    @classmethod
    def from_line(cls, line: str) -> "Field":
        m = re.fullmatch(r"FIELD p=(\d+) n=(\d+) modulus=([\d,]+)", line.strip())
        if not m:
            raise ValueError(f"not a FIELD line: {line!r}")
        return cls(int(m[1]), int(m[2]), [int(c) for c in m[3].split(",")])

    # -- codes ----------------------------------------------------------
    def coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(reversed(out))

    def code(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.n:
            raise DegreeMismatch(f"expected {self.n} coefficients, got {len(coeffs)}")
        c = 0
        for x in coeffs:
            c = c * self.p + int(x) % self.p
        return c

    def prime(self, c: int) -> int:
        """Code of the prime-field constant c."""
        return (c % self.p) * self.p ** (self.n - 1)

    @property
    def one(self) -> int:
        return self.prime(1)

    # -- scalar arithmetic on codes ---------------------------------------
    def add(self, a: int, b: int) -> int:
        return self.code([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def sub(self, a: int, b: int) -> int:
        return self.code([x - y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        return self.code([-x for x in self.coeffs(a)])

    def scale(self, c: int, a: int) -> int:
        """Multiply a by the integer c (prime-field scalar)."""
        return self.code([c * x for x in self.coeffs(a)])

    def _polymul(self, a: int, b: int) -> int:
        prod = _pmul(list(self.coeffs(a)), list(self.coeffs(b)), self.p)
        rem = _pmod(prod, self.modulus, self.p)
        return self.code(rem + [0] * (self.n - len(rem)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        q = self.order - 1
        return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % q])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        q = self.order - 1
        return int(self.exp_table[(-self.log_table[a]) % q])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return self.one if e == 0 else 0
        q = self.order - 1
        return int(self.exp_table[(self.log_table[a] * e) % q])

    def frobenius(self, a: int, j: int = 1) -> int:
        return self.pow(a, self.p ** (j % self.n))

    def trace(self, a: int) -> int:
        """T(a) = sum of a^(p^j), returned as an integer in [0, p)."""
        acc = 0
        for j in range(self.n):
            acc = self.add(acc, self.frobenius(a, j))
        c = self.coeffs(acc)
        assert all(x == 0 for x in c[1:]), "trace left the prime field"
        return c[0]

    # -- primitive element and log tables ---------------------------------
    @cached_property
    def primitive(self) -> int:
        q = self.order - 1
        factors = prime_factors(q)
        for g in range(1, self.order):
            if all(self._polypow(g, q // f) != self.one for f in factors):
                return g
        raise AssertionError("no primitive element; modulus is not irreducible")

    def _polypow(self, a: int, e: int) -> int:
        result, base = self.one, a
        while e:
            if e & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            e >>= 1
        return result

    @cached_property
    def exp_table(self) -> np.ndarray:
        q = self.order - 1
        out = np.zeros(max(q, 1), dtype=np.int64)
        x = self.one
        g = self.primitive
        for k in range(q):
            out[k] = x
            x = self._polymul(x, g)
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        out = np.full(self.order, -1, dtype=np.int64)
        for k, x in enumerate(self.exp_table):
            out[x] = k
        out[0] = -1
        return out

    # -- numpy tables -------------------------------------------------------
    def _check_table_size(self):
        if self.order > TABLE_LIMIT:
            raise TooLarge(f"tables limited to fields of size <= {TABLE_LIMIT}")

    @cached_property
    def digit_table(self) -> np.ndarray:
        """(order, n) coefficient vectors; row k is coeffs(k)."""
        return np.array(list(itertools.product(range(self.p), repeat=self.n)),
                        dtype=np.int64).reshape(self.order, self.n)

    @cached_property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    def codes_of(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits) % self.p) @ self.weights

    @cached_property
    def add_table(self) -> np.ndarray:
        self._check_table_size()
        d = self.digit_table
        return self.codes_of(d[:, None, :] + d[None, :, :])

    @cached_property
    def sub_table(self) -> np.ndarray:
        self._check_table_size()
        d = self.digit_table
        return self.codes_of(d[:, None, :] - d[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.codes_of(-self.digit_table)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._check_table_size()
        lg = self.log_table
        q = self.order - 1
        idx = (lg[:, None] + lg[None, :]) % q
        out = self.exp_table[idx]
        out[0, :] = 0
        out[:, 0] = 0
        return out

    def pow_table(self, e: int) -> np.ndarray:
        """Codes of x^e for every code x (e >= 1)."""
        q = self.order - 1
        out = self.exp_table[(self.log_table * e) % q]
        out[0] = 0
        return out

    @cached_property
    def trace_table(self) -> np.ndarray:
        acc = np.zeros((self.order, self.n), dtype=np.int64)
        for j in range(self.n):
            acc += self.digit_table[self.pow_table(self.p ** j)]
        acc %= self.p
        assert not acc[:, 1:].any(), "trace left the prime field"
        return acc[:, 0].copy()

    # -- element views --------------------------------------------------------
    def __call__(self, value) -> "GFElement":
        if isinstance(value, GFElement):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        if isinstance(value, int):
            return GFElement(self, self.prime(value))
        return GFElement(self, self.code(list(value)))

    def element(self, code: int) -> "GFElement":
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range")
        return GFElement(self, code)

    def elements(self) -> list["GFElement"]:
        return [GFElement(self, c) for c in range(self.order)]


@dataclass(frozen=True)
class GFElement:
    field: Field
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, GFElement):
            if other.field != self.field:
                raise FieldMismatch("operands live in different fields")
            return other.code
        if isinstance(other, int):
            return self.field.prime(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else GFElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else GFElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else GFElement(self.field, self.field.sub(o, self.code))

    def __neg__(self):
        return GFElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else GFElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.mul(self.code, self.field.inv(o)))

    def __pow__(self, e: int):
        return GFElement(self.field, self.field.pow(self.code, e))

    def inv(self) -> "GFElement":
        return GFElement(self.field, self.field.inv(self.code))

    def frobenius(self, j: int = 1) -> "GFElement":
        return GFElement(self.field, self.field.frobenius(self.code, j))

    def trace(self) -> int:
        return self.field.trace(self.code)

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"GF{self.field.p}^{self.field.n}{list(self.coeffs)}"


# ----------------------------------------------------------------------
# self-dual bases
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Basis:
    field: Field
    vectors: tuple[GFElement, ...]
    gram: tuple[tuple[int, ...], ...]

    def coordinates(self, x: GFElement) -> tuple[int, ...]:
        """Coordinates of x w.r.t. this basis; valid when gram is the identity."""
        return tuple((x * b).trace() for b in self.vectors)

    def combine(self, coords: Sequence[int]) -> GFElement:
        acc = self.field.element(0)
        for c, b in zip(coords, self.vectors):
            acc = acc + b * c
        return acc


def gram_matrix(vectors: Sequence[GFElement]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple((x * y).trace() for y in vectors) for x in vectors)


def _sqrt_mod(a: int, p: int) -> int | None:
    a %= p
    for s in range(p):
        if s * s % p == a:
            return s
    return None


def self_dual_basis(field: Field) -> Basis:
    """Basis b_i with T(b_i b_j) = delta_ij, by symmetric reduction of the trace form.

    Exists for p = 2 (any n) and for odd p with n odd.  Raises
    NoSelfDualBasis when the reduction leaves an unpaired non-square.
    """
    p = field.p

    def form(x, y):
        return (x * y).trace()

    rem = [field(tuple(1 if i == j else 0 for i in range(field.n))) for j in range(field.n)]
    done: list[GFElement] = []
    pending: list[GFElement] = []   # odd p: vectors with non-square self-product

    while rem:
        idx = next((i for i, r in enumerate(rem) if form(r, r) != 0), None)
        if idx is None:
            pair = next(((i, j) for i in range(len(rem)) for j in range(i + 1, len(rem))
                         if form(rem[i], rem[j]) != 0), None)
            if pair is None:
                raise NoSelfDualBasis("trace form degenerate on remaining block")
            i, j = pair
            if p != 2:
                rem[i] = rem[i] + rem[j]
                continue
            # char 2, alternating block: split off a hyperbolic pair and merge it
            # with a finished vector e into three orthonormal vectors.
            u, w = rem[i], rem[j]
            others = [r + u * form(r, w) + w * form(r, u)
                      for k, r in enumerate(rem) if k not in (i, j)]
            if not done:
                raise NoSelfDualBasis("alternating trace form")
            e = done.pop()
            done.extend([e + u + w, e + u, e + w])
            rem = others
            continue

        r = rem.pop(idx)
        d = form(r, r)
        dinv = pow(d, -1, p)
        rem = [x - r * (form(x, r) * dinv % p) for x in rem]
        s = _sqrt_mod(dinv, p)
        if s is not None:
            done.append(r * s)
            continue
        if not pending:
            pending.append(r)
            continue
        # two non-squares d1, d2: rescale the second to d1, then rotate to 1,1
        u = pending.pop()
        d1 = form(u, u)
        w = r * _sqrt_mod(d1 * dinv, p)
        target = pow(d1, -1, p)
        a, b = next((a, b) for a in range(p) for b in range(p) if (a * a + b * b) % p == target)
        done.extend([u * a + w * b, u * (-b % p) + w * a])

    if pending:
        raise NoSelfDualBasis(f"GF({p}^{field.n}) has no self-dual basis over Z_{p}")
    gram = gram_matrix(done)
    ident = tuple(tuple(int(i == j) for j in range(field.n)) for i in range(field.n))
    assert gram == ident, "self-dual reduction failed"
    return Basis(field, tuple(done), gram)


# ----------------------------------------------------------------------
# planar functions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    a: int | None = None       # code of the shift with a non-bijective difference map
    b: int | None = None       # code of a value hit != 1 times
    count: int | None = None   # number of solutions x of f(x+a) - f(x) = b

    def __bool__(self):
        return self.planar


def as_table(field: Field, f: Iterable) -> np.ndarray:
    vals = [v.code if isinstance(v, GFElement) else int(v) for v in f]
    if len(vals) != field.order:
        raise MalformedTable(f"table has {len(vals)} entries, field has {field.order}")
    arr = np.array(vals, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= field.order:
        raise MalformedTable("table value outside the field")
    return arr


def is_planar(field: Field, f: Iterable) -> PlanarityResult:
    """True iff x -> f(x+a) - f(x) is a bijection for every a != 0."""
    table = as_table(field, f)
    add, sub = field.add_table, field.sub_table
    for a in range(1, field.order):
        diff = sub[table[add[:, a]], table]
        counts = np.bincount(diff, minlength=field.order)
        bad = np.flatnonzero(counts != 1)
        if bad.size:
            b = int(bad[0])
            return PlanarityResult(False, a, b, int(counts[b]))
    return PlanarityResult(True)
