"""Affine planes from spread sets and from planar functions.

Points of V + V are numbered rank(x) * N + rank(y), with rank the
lexicographic index of the coordinate vector (for field elements, the code).
Lines are stored as an (N^2 + N) x N array, written parallel class by
parallel class, N lines per class.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import NotPlanar
from .geometry import SpreadSet
from .gf import Field, as_table, is_planar
from .linalg import rank_large, vspace
from .report import CheckReport

EXHAUSTIVE_LIMIT = 32


@dataclass
class AffinePlane:
    order: int
    lines: np.ndarray                    # (N^2 + N, N) point indices
    p: int
    provenance: dict = dc_field(default_factory=dict)

    @property
    def num_points(self) -> int:
        return self.order ** 2

    def parallel_classes(self) -> list[np.ndarray]:
        N = self.order
        return [self.lines[k * N:(k + 1) * N] for k in range(len(self.lines) // N)]

    def incidence_matrix(self) -> np.ndarray:
        """Points x lines, 0/1."""
        inc = np.zeros((self.num_points, len(self.lines)), dtype=np.uint8)
        for j, line in enumerate(self.lines):
            inc[line, j] = 1
        return inc


def plane_from_spreadset(K: SpreadSet) -> AffinePlane:
    """Lines x = b, then y = Mx + b for each M in K, b in V."""
    N = K.p ** K.n
    V = vspace(K.p, K.n)
    ys = np.arange(N)
    lines = [b * N + ys for b in range(N)]
    xs = np.arange(N)
    for M in K.matrices:
        mx = V.apply(M)
        for b in range(N):
            lines.append(xs * N + V.indices(V.digits[mx] + V.digits[b]))
    return AffinePlane(N, np.array(lines, dtype=np.int64), K.p, {"construction": "spreadset"})


def plane_from_planar(field: Field, f) -> AffinePlane:
    """Lines x = b, then y = f(x + a) + b, one parallel class per a."""
    tab = as_table(field, f)
    res = is_planar(field, tab)
    if not res:
        raise NotPlanar(f"f(x+{res.a}) - f(x) takes value {res.b} {res.count} times")
    N = field.order
    add = field.add_table
    xs = np.arange(N)
    lines = [b * N + xs for b in range(N)]
    for a in range(N):
        fa = tab[add[xs, a]]
        for b in range(N):
            lines.append(xs * N + add[fa, b])
    return AffinePlane(N, np.array(lines, dtype=np.int64), field.p, {"construction": "planar"})


def _structure_witness(plane: AffinePlane):
    N = plane.order
    L = plane.lines
    if L.ndim != 2 or L.shape[1] != N:
        return ("line_size", L.shape)
    if L.size and (L.min() < 0 or L.max() >= N * N):
        return ("point_range", int(np.argwhere((L < 0) | (L >= N * N))[0][0]))
    srt = np.sort(L, axis=1)
    rep = (srt[:, 1:] == srt[:, :-1]).any(axis=1)
    if rep.any():
        return ("repeated_point", int(np.flatnonzero(rep)[0]))
    return None


def _pair_counts_exhaustive(plane: AffinePlane) -> np.ndarray:
    P = plane.num_points
    L = plane.lines
    cnt = np.zeros(P * P, dtype=np.int64)
    idx = (L[:, :, None] * P + L[:, None, :]).ravel()
    np.add.at(cnt, idx, 1)
    return cnt.reshape(P, P)


def _point_lines(plane: AffinePlane) -> list[np.ndarray]:
    flat = plane.lines.ravel()
    order = np.argsort(flat, kind="stable")
    line_of = order // plane.order
    bounds = np.searchsorted(flat[order], np.arange(plane.num_points + 1))
    return [line_of[bounds[k]:bounds[k + 1]] for k in range(plane.num_points)]


def verify_plane_axioms(plane: AffinePlane, mode: str = "exhaustive", seed: int = 0,
                        count: int = 10000) -> CheckReport:
    """Line sizes, counts, parallel classes and the two-point axiom.

    ``mode="exhaustive"`` covers every point pair and is used whenever
    N <= 32; above that only ``count`` random pairs (from ``seed``) are checked.
    """
    name = "plane"
    N = plane.order
    P = N * N
    details = [f"order={N}"]
    w = _structure_witness(plane)
    if w:
        return CheckReport(name, False, details + [f"malformed line data: {w}"], witness=w)

    if mode == "exhaustive" and N > EXHAUSTIVE_LIMIT:
        mode = "sampled"
    if mode == "exhaustive":
        cnt = _pair_counts_exhaustive(plane)
        np.fill_diagonal(cnt, 1)
        bad = cnt != 1
        if bad.any():
            a, b = map(int, np.argwhere(bad)[0])
            return CheckReport(name, False, details + [f"points {a},{b} lie on {cnt[a, b]} common lines"],
                               witness=("pair", a, b, int(cnt[a, b])))
        details.append(f"all {P * (P - 1) // 2} point pairs on exactly one line")
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        on = _point_lines(plane)
        pairs = rng.integers(0, P, size=(count, 2))
        for a, b in pairs:
            if a == b:
                continue
            k = len(np.intersect1d(on[a], on[b], assume_unique=True))
            if k != 1:
                return CheckReport(name, False, details + [f"points {a},{b} lie on {k} common lines"],
                                   witness=("pair", int(a), int(b), k))
        details.append(f"{count} sampled point pairs (seed={seed}) on exactly one line")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    if len(plane.lines) != P + N:
        return CheckReport(name, False, details + [f"{len(plane.lines)} lines, expected {P + N}"],
                           witness=("line_count", len(plane.lines), P + N))
    everything = np.arange(P)
    for k, cls in enumerate(plane.parallel_classes()):
        if not np.array_equal(np.sort(cls.ravel()), everything):
            return CheckReport(name, False, details + [f"class {k} does not partition the points"],
                               witness=("parallel_class", k))
    details.append(f"{P} points, {P + N} lines of size {N}, {N + 1} parallel classes")
    return CheckReport(name, True, details)


def plane_p_rank(plane: AffinePlane) -> int:
    """Rank over Z_p of the point-line incidence matrix."""
    return rank_large(plane.incidence_matrix(), plane.p)
