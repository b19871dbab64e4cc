import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import planar_family
from mubplanes.cyclo import CycInt, Root, hermitian_inner, squared_magnitude_is
from mubplanes.errors import DimensionMismatch, NotIsotropic, NotSingular, WrongCharacteristic
from mubplanes.families import bkl_exponents, desarguesian, desarguesian_exponents
from mubplanes.frames import (MubSet, Orthoframe, WeylOperator, apply_weyl, eigenframe, frames_equal_as_sets,
                              frames_from_exponents, frames_from_spreadset, frames_from_spreadset_binary,
                              frames_from_spreadset_odd, standard_frame, to_fourth_root, verify_mub_set)
from mubplanes.geometry import SpreadSet, Subspace, horizontal, search_orthogonal_spreads, spread_from_spreadset, vertical
from mubplanes.linalg import vspace

I = Root.i()


def complex_rows(F: Orthoframe) -> np.ndarray:
    """Floating-point vectors (test-only oracle)."""
    w = np.exp(2j * np.pi / F.root.order)
    t = F.exponents()
    return np.where(t >= 0, w ** np.maximum(t, 0), 0)


def numeric_is_mub(M: MubSet) -> bool:
    N = M.dim
    mats = [complex_rows(F) / np.sqrt(N) if F.kind != "standard" else complex_rows(F) for F in M.frames]
    for A in mats:
        A = A / np.linalg.norm(A, axis=1, keepdims=True)
        if not np.allclose(A @ A.conj().T, np.eye(N), atol=1e-9):
            return False
    for A, B in itertools.combinations(mats, 2):
        A = A / np.linalg.norm(A, axis=1, keepdims=True)
        B = B / np.linalg.norm(B, axis=1, keepdims=True)
        if not np.allclose(np.abs(A @ B.conj().T) ** 2, 1 / N, atol=1e-9):
            return False
    return True


def qubit_triple():
    return frames_from_spreadset_binary(SpreadSet(2, 1, (((0,),), ((1,),))))


def test_qubit_triple_example():
    M = qubit_triple()
    # e[a][v] = 2av + Mv^2 (mod 4)
    assert [F.exponents().tolist() for F in M.frames[1:]] == [[[0, 0], [0, 2]], [[0, 1], [0, 3]]]
    F1 = Orthoframe(2, I, "", np.array([[0, 0], [0, 2]]))     # (1,1), (1,-1)
    F2 = Orthoframe(2, I, "", np.array([[0, 1], [0, 3]]))     # (1,i), (1,-i)
    assert frames_equal_as_sets(M.frames[1], F1) and frames_equal_as_sets(M.frames[2], F2)
    assert verify_mub_set(M) and M.complete


def test_qutrit_example():
    M = frames_from_spreadset_odd(SpreadSet(3, 1, (((0,),), ((1,),), ((2,),))))
    assert len(M.frames) == 4 and verify_mub_set(M)
    assert np.array_equal(M.frames[1].table, vspace(3, 1).dot_table())     # M = 0: Fourier frame


def test_fourier_binary_entries_real():
    M = frames_from_spreadset(desarguesian(2, 3))
    assert set(np.unique(M.frames[1].table)) <= {0, 2}
    assert M.frames[1].is_real()


def test_wrong_characteristic():
    with pytest.raises(WrongCharacteristic):
        frames_from_spreadset_odd(desarguesian(2, 1))
    with pytest.raises(WrongCharacteristic):
        frames_from_spreadset_binary(desarguesian(3, 1))


def test_standard_vs_exponent_single_term():
    M = frames_from_spreadset(desarguesian(3, 1))
    std, F = M.frames[0].vectors(), M.frames[2].vectors()
    for u in std:
        for v in F:
            z = hermitian_inner(u, v)
            assert z.as_root_multiple() is not None and squared_magnitude_is(z, 1)


SMALL_SETS = {
    "des21": lambda: frames_from_spreadset(desarguesian(2, 1)),
    "des22": lambda: frames_from_spreadset(desarguesian(2, 2)),
    "des23": lambda: frames_from_spreadset(desarguesian(2, 3)),
    "des24": lambda: frames_from_spreadset(desarguesian(2, 4)),
    "des31": lambda: frames_from_spreadset(desarguesian(3, 1)),
    "des32": lambda: frames_from_exponents(desarguesian_exponents(3, 2)),
    "des33": lambda: frames_from_spreadset(desarguesian(3, 3)),
    "des51": lambda: frames_from_spreadset(desarguesian(5, 1)),
    "des52": lambda: frames_from_exponents(desarguesian_exponents(5, 2)),
    "des71": lambda: frames_from_spreadset(desarguesian(7, 1)),
    "bkl331": lambda: frames_from_exponents(bkl_exponents(3, 3, 1)),
}


@pytest.mark.parametrize("name", sorted(SMALL_SETS))
def test_modes_agree_and_match_numeric_oracle(name):
    M = SMALL_SETS[name]()
    a = verify_mub_set(M, "all-pairs")
    d = verify_mub_set(M, "difference-class")
    assert a.passed and d.passed
    if M.dim <= 16:
        assert numeric_is_mub(M)
    # a corrupted copy fails in both modes and numerically
    t = M.frames[2].table.copy()
    t[1, 1] = (t[1, 1] + 1) % M.root.order
    bad = M.with_frames(M.frames[:2] + [Orthoframe(M.dim, M.root, "bad", t)] + M.frames[3:])
    assert not verify_mub_set(bad, "all-pairs")
    assert not verify_mub_set(bad, "difference-class")
    if M.dim <= 16:
        assert not numeric_is_mub(bad)


def test_duplicate_frame_fails_with_square_magnitude_n2():
    M = frames_from_spreadset(desarguesian(3, 1))
    dup = Orthoframe(3, M.root, "copy", M.frames[1].table)
    short = M.with_frames(M.frames[:2] + [dup])
    rep = verify_mub_set(short)
    assert not rep
    F, G, kind, r, s, norm = rep.witness
    assert (F, G, kind) == ("M0", "copy", "unbiased")
    assert norm == [9, 0, 0]      # |<v, v>|^2 = N^2


@given(st.sampled_from(["des22", "des31", "des23"]), st.randoms(use_true_random=False))
def test_verdict_invariant_under_permutation_and_phases(name, rnd):
    M = SMALL_SETS[name]()
    frames = []
    for F in M.frames:
        t = F.exponents().copy()
        order = list(range(M.dim))
        rnd.shuffle(order)
        t = t[order]
        shift = np.array([rnd.randrange(M.root.order) for _ in range(M.dim)])
        t = np.where(t >= 0, (t + shift[:, None]) % M.root.order, -1)
        frames.append(Orthoframe(M.dim, M.root, F.label, t))
    rnd.shuffle(frames)
    assert verify_mub_set(M.with_frames(frames))
    by_label = {F.label: F for F in frames}
    assert all(frames_equal_as_sets(by_label[F.label], F) for F in M.frames)


def test_unbiasedness_symmetric():
    M = SMALL_SETS["des33"]()
    rev = M.with_frames(list(reversed(M.frames)))
    assert verify_mub_set(rev).passed == verify_mub_set(M).passed


def test_apply_weyl_examples():
    V = vspace(3, 2)
    M = frames_from_spreadset(desarguesian(2, 3))
    std = M.frames[0]
    assert frames_equal_as_sets(apply_weyl(WeylOperator("Z", (1, 0, 1)), std), std)
    fourier = Orthoframe(9, Root.zeta(3), "fourier", V.dot_table())
    moved = apply_weyl(WeylOperator("X", (1, 2)), fourier)
    assert frames_equal_as_sets(moved, fourier)
    assert not np.array_equal(moved.table, fourier.table)
    with pytest.raises(DimensionMismatch):
        apply_weyl(WeylOperator("X", (1,)), fourier)


def test_weyl_x_moves_planar_frame(planar):
    F = planar.frames[2]
    moved = apply_weyl(WeylOperator("X", (1, 0, 0, 0, 0)), F)
    assert not any(frames_equal_as_sets(moved, G) for G in planar.frames)


def test_frames_equal_examples():
    V = vspace(2, 2)
    F = frames_from_spreadset(desarguesian(2, 2)).frames[2]
    perm = F.table[[3, 1, 0, 2]]
    assert frames_equal_as_sets(Orthoframe(4, I, "", perm), F)
    scaled = F.table.copy()
    scaled[0] = (scaled[0] + 1) % 4
    assert frames_equal_as_sets(Orthoframe(4, I, "", scaled), F)
    fourier = Orthoframe(4, I, "", 2 * V.dot_table() % 4)
    assert not frames_equal_as_sets(fourier, standard_frame(4, I))
    with pytest.raises(DimensionMismatch):
        frames_equal_as_sets(fourier, standard_frame(2, I))
    signs = Orthoframe(4, Root.zeta(2), "", V.dot_table())
    assert frames_equal_as_sets(signs, fourier)
    assert np.array_equal(to_fourth_root(signs).table, fourier.table)


def test_eigenframe_examples():
    Z = vertical(3, 2)
    assert frames_equal_as_sets(eigenframe(Z, "complex-odd-p"), standard_frame(9, Root.zeta(3)))
    X = horizontal(3, 2)
    fourier = Orthoframe(9, Root.zeta(3), "", vspace(3, 2).dot_table())
    assert frames_equal_as_sets(eigenframe(X, "complex-odd-p"), fourier)
    S = search_orthogonal_spreads(2, 1)[0]
    for A in S.members:
        E = eigenframe(A, "real-binary")
        assert E.is_real()
        assert verify_mub_set(MubSet(4, I, [E]))


def test_eigenframe_errors():
    bad = Subspace.span([(1, 0, 1, 0), (0, 1, 0, 0)], 2)        # singular? no: Q(1,0|1,0) = 1
    with pytest.raises(NotSingular):
        eigenframe(bad, "real-binary")
    with pytest.raises(NotIsotropic):
        eigenframe(Subspace.span([(1, 0, 0, 0), (0, 0, 1, 0)], 3), "complex-odd-p")
    with pytest.raises(WrongCharacteristic):
        eigenframe(vertical(2, 2), "complex-odd-p")
    with pytest.raises(DimensionMismatch):
        eigenframe(Subspace.span([(1, 0, 0, 0)], 3), "complex-odd-p")


def test_isotropic_but_not_singular_complex_binary():
    """A member with Q = 1 vectors still gives a frame in the complex context."""
    A = Subspace.span([(1, 0, 1, 0), (0, 1, 0, 1)], 2)
    assert A.isotropy_witness() is None and A.singularity_witness() is not None
    E = eigenframe(A, "complex-binary")
    assert verify_mub_set(MubSet(4, I, [E]))
    assert not E.is_real()


def test_bound_and_complete():
    M = SMALL_SETS["des22"]()
    assert M.bound == 5 and M.complete
    rep = verify_mub_set(M.with_frames(M.frames + [M.frames[1]]))
    assert not rep and rep.witness[0] == "bound"
