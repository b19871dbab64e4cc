"""Inequivalence witnesses: standard Weyl-group invariance, planar orbits, invariant records.

A FAIL of the invariance test shows only that the standard group X(V)Z(V)
does not fix every frame; other extraspecial groups are not searched.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import WrongProvenance
from .frames import MubSet, apply_weyl, frames_equal_as_sets, standard_generators
from .linalg import vspace
from .planes import AffinePlane, plane_p_rank, verify_plane_axioms
from .report import CheckReport


def _map(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def standard_invariance_test(M: MubSet, threads: int = 1) -> CheckReport:
    """Does every X(e_i), Z(e_i) map every frame to itself (as a set of 1-spaces)?

    Per generator the frames are scanned in order and the first moved frame
    is reported; details hold one line per generator.
    """
    gens = standard_generators(M.p, M.n)

    def run(w):
        for F in M.frames:
            if not frames_equal_as_sets(apply_weyl(w, F), F):
                return F.label
        return None

    moved = _map(run, gens, threads)
    details = [f"{w} {'PASS' if m is None else 'FAIL frame ' + m}" for w, m in zip(gens, moved)]
    per_gen = {str(w): m is None for w, m in zip(gens, moved)}
    failing = [(str(w), m) for w, m in zip(gens, moved) if m is not None]
    if failing:
        return CheckReport("standard_invariance", False, details, witness=failing[0], data=per_gen)
    return CheckReport("standard_invariance", True, details, data=per_gen)


def _canon(t: np.ndarray, q: int) -> np.ndarray:
    mask = t >= 0
    first = mask.argmax(axis=1)
    base = t[np.arange(len(t)), first]
    return np.where(mask, (t - base[:, None]) % q, -1).astype(np.int16)


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def planar_orbit_check(M: MubSet) -> CheckReport:
    """Orbits on all member 1-spaces of the diagonal group e_x -> zeta^(c.x + c'.f(x)) e_x.

    The two generator types are read off the frames: c.x is the row pairing of
    the frame labelled b=0, and c.f(x) is the difference theta_c - theta_0 of
    first rows.  Expected: N fixed 1-spaces and one orbit of size N^2.
    """
    if M.provenance.get("family") != "planar":
        raise WrongProvenance(f"orbit check needs a planar-function set, got {M.provenance.get('family')!r}")
    N, q = M.dim, M.root.order
    V = vspace(M.p, M.n)
    by_label = {F.label: F for F in M.frames}
    base = by_label["b=0"].exponents()
    adds = []
    for c in V.basis_indices:
        adds.append((base[c] - base[0]) % q)
        adds.append((by_label[f"b={c}"].exponents()[0] - base[0]) % q)

    tables = [F.exponents() for F in M.frames]
    allrows = np.concatenate(tables)
    keys = {r.tobytes(): k for k, r in enumerate(_canon(allrows, q))}
    total = len(allrows)
    if len(keys) != total:
        return CheckReport("planar_orbits", False, ["member 1-spaces are not distinct"],
                           witness=("duplicate", total - len(keys)))
    parent = list(range(total))
    mask = allrows >= 0
    for add in adds:
        moved = _canon(np.where(mask, (allrows + add[None, :]) % q, -1), q)
        for k, row in enumerate(moved):
            j = keys.get(row.tobytes())
            if j is None:
                return CheckReport("planar_orbits", False, [f"image of member {k} is not a member"],
                                   witness=("not_closed", k))
            a, b = _find(parent, k), _find(parent, j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    sizes: dict[int, int] = {}
    for k in range(total):
        r = _find(parent, k)
        sizes[r] = sizes.get(r, 0) + 1
    hist: dict[int, int] = {}
    for s in sizes.values():
        hist[s] = hist.get(s, 0) + 1
    summary = " ".join(f"{cnt}x{size}" for size, cnt in sorted(hist.items()))
    details = [f"{total} member 1-spaces, orbits (count x size): {summary}"]
    data = {"orbit_sizes": dict(sorted(hist.items()))}
    if hist == {1: N, N * N: 1}:
        return CheckReport("planar_orbits", True, details, data=data)
    return CheckReport("planar_orbits", False, details, witness=("orbits", summary), data=data)


# ----------------------------------------------------------------------

@dataclass
class InvariantRecord:
    fields: dict

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.fields.items())


def mubset_id(M: MubSet) -> str:
    h = hashlib.sha256()
    h.update(f"{M.root.kind}:{M.root.order}:{M.dim}:{len(M.frames)}".encode())
    for F in M.frames:
        h.update(F.label.encode() + b"\0")
        h.update(np.ascontiguousarray(F.exponents(), dtype=np.int64).tobytes())
    return h.hexdigest()[:16]


def invariant_battery(M: MubSet, plane: AffinePlane | None = None, threads: int = 1) -> InvariantRecord:
    rec: dict = {"id": mubset_id(M), "dim": M.dim, "frames": len(M.frames),
                 "root": "i" if M.root.kind == "i" else f"zeta{M.root.order}",
                 "complete": M.complete}
    for k in sorted(M.provenance):
        rec[f"meta.{k}"] = M.provenance[k]
    inv = standard_invariance_test(M, threads)
    rec["standard_invariance"] = inv.verdict
    for line in inv.details:
        gen, verdict = line.split(" ", 1)
        rec[f"standard_invariance.{gen}"] = verdict
    planar = M.provenance.get("family") == "planar"
    if planar:
        orb = planar_orbit_check(M)
        rec["planar_orbits"] = orb.verdict
        rec["planar_orbits.sizes"] = " ".join(f"{s}:{c}" for s, c in orb.data.get("orbit_sizes", {}).items())
    if plane is not None:
        # rank ties to equivalence only for spread-based sets; pi(f) is kept under its own key
        prefix = "pi_f" if planar else "plane"
        rec[f"{prefix}.order"] = plane.order
        ax = verify_plane_axioms(plane)
        rec[f"{prefix}.axioms"] = ax.verdict
        if not planar:
            rec[f"{prefix}.p_rank"] = plane_p_rank(plane)
    return InvariantRecord(rec)
