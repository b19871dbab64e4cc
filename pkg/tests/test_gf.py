import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mubplanes.errors import (DegreeMismatch, DivisionByZero, FieldMismatch, MalformedTable,
                              NonPrime, NoSelfDualBasis, ReduciblePolynomial)
from mubplanes.gf import Field, default_modulus, gram_matrix, is_irreducible, is_planar, self_dual_basis

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (7, 1)]


# --- independent polynomial oracle (lists, constant term first) -----------

def _pmod(a, m, p):
    a = list(a)
    while len(a) >= len(m):
        c = a[-1] % p
        shift = len(a) - len(m)
        if c:
            for i, x in enumerate(m):
                a[shift + i] = (a[shift + i] - c * x) % p
        a.pop()
    return a


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _brute_irreducible(poly, p):
    n = len(poly) - 1
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_pmod(poly, list(low) + [1], p)):
                return False
    return True


def _oracle_mul(F, a, b):
    prod = _pmul(list(F.coeffs(a)), list(F.coeffs(b)), F.p)
    r = _pmod(prod, list(F.modulus), F.p) + [0] * F.n
    return F.code(r[:F.n])


# --------------------------------------------------------------------------

def test_examples_field_create():
    assert Field(2, 1).order == 2
    assert Field(2, 2).modulus == (1, 1, 1)
    assert Field(3, 2, [1, 0, 1]).modulus == (1, 0, 1)
    with pytest.raises(NonPrime):
        Field(4, 1)
    with pytest.raises(ReduciblePolynomial):
        Field(2, 2, [1, 0, 1])
    with pytest.raises(DegreeMismatch):
        Field(2, 3, [1, 1, 1])


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_matches_trial_division(p, n):
    for low in itertools.product(range(p), repeat=n):
        poly = list(low) + [1]
        assert is_irreducible(poly, p) == _brute_irreducible(poly, p), poly


@pytest.mark.parametrize("p,n", SMALL)
def test_default_modulus_is_lex_first_irreducible(p, n):
    first = next(list(low) + [1] for low in itertools.product(range(p), repeat=n)
                 if _brute_irreducible(list(low) + [1], p))
    assert list(default_modulus(p, n)) == first


def test_gf4_examples():
    F = Field(2, 2)
    t = F([0, 1])
    assert (t * t).coeffs == (1, 1)
    assert t.trace() == 1
    assert F(1).trace() == 0
    assert F(0).trace() == 0


def test_gf9_frobenius_twice_is_identity():
    F = Field(3, 2)
    for x in F.elements():
        assert x.frobenius().frobenius() == x


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (3, 4)])
def test_field_axioms_exhaustive(p, n):
    F = Field(p, n)
    N = F.order
    mul, add = F.mul_table, F.add_table
    for a in range(N):
        for b in range(N):
            assert mul[a, b] == _oracle_mul(F, a, b)
    x = np.arange(N)
    a, b, c = np.meshgrid(x, x, x, indexing="ij")
    assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
    assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
    assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
    for k in range(1, N):
        assert mul[k, F.inv(k)] == F.one


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (3, 4)])
def test_trace_linear_frobenius_invariant_onto(p, n):
    F = Field(p, n)
    tr = F.trace_table
    N = F.order
    for x in range(N):
        # oracle: sum of the n conjugates, via the test's own polynomial product
        conj, total = x, [0] * n
        for _ in range(n):
            total = [(u + v) % p for u, v in zip(total, F.coeffs(conj))]
            nxt = F.one
            for _ in range(p):
                nxt = _oracle_mul(F, nxt, conj)
            conj = nxt
        assert all(c == 0 for c in total[1:])
        assert tr[x] == total[0]
        assert tr[F.pow(x, p)] == tr[x]
        for y in range(N):
            assert tr[F.add(x, y)] == (tr[x] + tr[y]) % p
    assert set(tr.tolist()) == set(range(p))


def test_arith_errors():
    F, G = Field(2, 2), Field(2, 3)
    with pytest.raises(DivisionByZero):
        F(0).inv()
    with pytest.raises(FieldMismatch):
        F(1) + G(1)


@given(st.sampled_from([(2, 5), (3, 3), (5, 2), (7, 2)]), st.data())
def test_random_arithmetic_laws(pn, data):
    F = Field(*pn)
    a, b, c = (F.element(data.draw(st.integers(0, F.order - 1))) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == F(0)
    if a:
        assert a * a.inv() == F(1)
        assert (a / a) == F(1)
    assert a ** (F.order - 1) == (F(1) if a else F(0))


def test_field_line_roundtrip():
    F = Field(3, 5)
    assert F.to_line() == "FIELD p=3 n=5 modulus=1,0,0,0,2,1"
    assert Field.from_line(F.to_line()) == F


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 3), (5, 1), (5, 3), (7, 3), (3, 5)])
def test_self_dual_basis_gram_identity(p, n):
    F = Field(p, n)
    B = self_dual_basis(F)
    assert len(B.vectors) == n
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    assert B.gram == ident
    # recompute Gram independently from the oracle product and trace
    for i, bi in enumerate(B.vectors):
        for j, bj in enumerate(B.vectors):
            assert F.trace(_oracle_mul(F, bi.code, bj.code)) == ident[i][j]
    assert gram_matrix(B.vectors) == ident


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 4), (7, 2)])
def test_no_self_dual_basis_odd_p_even_n(p, n):
    with pytest.raises(NoSelfDualBasis):
        self_dual_basis(Field(p, n))


def _count_solutions(F, tab, a, b):
    return sum(1 for x in range(F.order) if F.sub(int(tab[F.add(x, a)]), int(tab[x])) == b)


def test_planarity_examples():
    F3 = Field(3, 1)
    assert is_planar(F3, [F3.pow(x, 2) for x in range(3)])
    r = is_planar(F3, [F3.pow(x, 3) for x in range(3)])
    assert not r and r.a == 1 and _count_solutions(F3, [F3.pow(x, 3) for x in range(3)], r.a, r.b) != 1
    F = Field(3, 5)
    assert is_planar(F, F.pow_table(14))
    with pytest.raises(MalformedTable):
        is_planar(F3, [0, 1])


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3), (2, 3)])
def test_planarity_matches_counting_oracle_on_monomials(p, n):
    F = Field(p, n)
    for e in range(F.order):
        tab = [F.pow(x, e) for x in range(F.order)]
        oracle = all(_count_solutions(F, tab, a, b) == 1 for a in range(1, F.order) for b in range(F.order))
        res = is_planar(F, tab)
        assert bool(res) == oracle, e
        if not res:
            assert _count_solutions(F, tab, res.a, res.b) == res.count != 1


@given(st.lists(st.integers(0, 8), min_size=9, max_size=9))
def test_planarity_matches_counting_oracle_random_tables(tab):
    F = Field(3, 2)
    oracle = all(_count_solutions(F, tab, a, b) == 1 for a in range(1, 9) for b in range(9))
    assert bool(is_planar(F, tab)) == oracle
