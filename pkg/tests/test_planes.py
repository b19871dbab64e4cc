from math import comb

import numpy as np
import pytest

from mubplanes.errors import NotPlanar
from mubplanes.families import desarguesian, kantor_binary
from mubplanes.geometry import graph, spreadset_from_spread
from mubplanes.gf import Field
from mubplanes.linalg import vspace
from mubplanes.planes import AffinePlane, plane_from_planar, plane_from_spreadset, plane_p_rank, verify_plane_axioms


def rank_oracle(mat, p):
    """Plain Gaussian elimination over Z_p on Python lists (independent of linalg)."""
    rows = [[int(x) % p for x in r] for r in mat]
    rank, cols = 0, len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_ag22():
    P = plane_from_spreadset(desarguesian(2, 1))
    assert P.num_points == 4 and len(P.lines) == 6
    assert verify_plane_axioms(P)
    assert plane_p_rank(P) == 3 == rank_oracle(P.incidence_matrix(), 2)


def test_ag23_counts_and_vertical_class():
    P = plane_from_spreadset(desarguesian(3, 1))
    assert P.num_points == 9 and len(P.lines) == 12
    assert sorted(P.parallel_classes()[0].ravel().tolist()) == list(range(9))


def test_deleted_line_fails_with_pair_witness():
    P = plane_from_spreadset(desarguesian(2, 1))
    Q = AffinePlane(2, P.lines[1:], 2)
    rep = verify_plane_axioms(Q)
    assert not rep
    kind, a, b, cnt = rep.witness
    assert kind == "pair" and cnt == 0
    assert not any(a in line and b in line for line in Q.lines.tolist())


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (2, 4), (3, 3), (2, 5)])
def test_desarguesian_p_rank_formula(p, n):
    """p-rank of AG(2, p^n) is C(p+1, 2)^n."""
    if p % 2 and n % 2 == 0:
        from mubplanes.families import desarguesian_exponents
        from mubplanes.geometry import SpreadSet
        fam = desarguesian_exponents(p, n)
        K = SpreadSet(p, n, tuple(fam.quadratic_matrix(k) for k in range(fam.N)))
    else:
        K = desarguesian(p, n)
    P = plane_from_spreadset(K)
    assert verify_plane_axioms(P)
    assert plane_p_rank(P) == comb(p + 1, 2) ** n


@pytest.mark.parametrize("p,n", [(2, 2), (3, 1), (2, 3)])
def test_rank_matches_oracle_and_is_permutation_invariant(p, n):
    P = plane_from_spreadset(desarguesian(p, n))
    inc = P.incidence_matrix()
    r = plane_p_rank(P)
    assert r == rank_oracle(inc, p)
    rng = np.random.default_rng(7)
    for _ in range(3):
        shuffled = inc[rng.permutation(inc.shape[0])][:, rng.permutation(inc.shape[1])]
        assert rank_oracle(shuffled, p) == r
        relabel = rng.permutation(P.num_points)
        Q = AffinePlane(P.order, relabel[P.lines], p)
        assert plane_p_rank(Q) == r


def test_lines_are_cosets_of_graphs():
    K = desarguesian(2, 3)
    P = plane_from_spreadset(K)
    N = 8
    V = vspace(2, 3)
    for k, M in enumerate(K.matrices):
        G = graph(M, 2)
        for b in range(N):
            line = P.lines[N * (k + 1) + b]
            pts = {(V.vector(int(q) // N), V.vector(int(q) % N)) for q in line}
            want = {(x, tuple((y + z) % 2 for y, z in zip(w, V.vector(b)))) for x, w in
                    ((v[:3], v[3:]) for v in G.vectors())}
            assert pts == want


def test_kantor_plane_exhaustive():
    P = plane_from_spreadset(spreadset_from_spread(kantor_binary(5)))
    rep = verify_plane_axioms(P)
    assert rep and "all 523776 point pairs" in rep.line()


def test_planar_planes():
    F = Field(3, 1)
    P = plane_from_planar(F, [F.pow(x, 2) for x in range(3)])
    assert verify_plane_axioms(P)
    with pytest.raises(NotPlanar):
        plane_from_planar(F, [F.pow(x, 3) for x in range(3)])
    F9 = Field(3, 2)
    assert verify_plane_axioms(plane_from_planar(F9, F9.pow_table(2)))


def test_planar_plane_243_sampled():
    F = Field(3, 5)
    P = plane_from_planar(F, F.pow_table(14))
    rep = verify_plane_axioms(P, "sampled", seed=0, count=10000)
    assert rep and "10000 sampled" in rep.line()
    assert verify_plane_axioms(P, "sampled", seed=0).line() == rep.line()
