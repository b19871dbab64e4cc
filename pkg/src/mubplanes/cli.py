"""Command-line front end.

Exit status: 0 when every check passes, 1 when a verifier fails, 2 for
usage, parameter, parse or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import formats
from .errors import BadParameters, MubError
from .equiv import invariant_battery
from .families import bkl_exponents, desarguesian, desarguesian_exponents, kantor_binary, planar_exponents
from .frames import MubSet, frames_from_exponents, frames_from_spreadset, verify_mub_set
from .geometry import (SpreadSet, SymplecticSpread, search_orthogonal_spreads, spread_from_spreadset,
                       spreadset_from_spread, verify_orthogonal_spread, verify_symplectic_spread)
from .gf import Field
from .planes import AffinePlane, plane_from_planar, plane_from_spreadset, verify_plane_axioms
from .report import CheckReport

FAMILIES = ("desarguesian", "kantor", "bkl", "planar")
MUB_MODES = ("all-pairs", "difference-class")
PLANE_MODES = ("exhaustive", "sampled")
ALL_PAIRS_LIMIT = 32


@dataclass
class Built:
    mubset: MubSet
    spreadset: SpreadSet | None = None
    spread: SymplecticSpread | None = None
    plane: AffinePlane | None = None


def _spreadset_of(fam) -> SpreadSet | None:
    mats = [fam.quadratic_matrix(k) for k in range(len(fam.labels))]
    if any(m is None for m in mats):
        return None
    return SpreadSet(fam.p, fam.n, tuple(mats))


def build_family(family: str, p: int | None, n: int, s: int | None = None, k: int | None = None,
                 with_plane: bool = True) -> Built:
    """Construct a family instance and whatever spread and plane it comes with."""
    if n is None or n < 1:
        raise BadParameters("--n must be a positive integer")
    if family == "desarguesian":
        if p is None:
            raise BadParameters("desarguesian needs --p")
        prov = {"family": "desarguesian", "p": p, "n": n}
        if p == 2 or n % 2:
            K = desarguesian(p, n)
            M = frames_from_spreadset(K, prov)
        else:
            fam = desarguesian_exponents(p, n)
            M = frames_from_exponents(fam)
            K = _spreadset_of(fam)
    elif family == "kantor":
        if p not in (None, 2):
            raise BadParameters("the Kantor family is binary: --p 2")
        K = spreadset_from_spread(kantor_binary(n))
        M = frames_from_spreadset(K, {"family": "kantor", "p": 2, "n": n})
    elif family == "bkl":
        if s is None or p is None:
            raise BadParameters("bkl needs --p and --s")
        fam = bkl_exponents(p, n, s)
        M = frames_from_exponents(fam)
        K = _spreadset_of(fam)
    elif family == "planar":
        if p not in (None, 3) or k is None:
            raise BadParameters("planar needs --p 3 and --k")
        fam = planar_exponents(n, k)
        M = frames_from_exponents(fam)
        plane = plane_from_planar(fam.field, fam.f_table) if with_plane else None
        return Built(M, None, None, plane)
    else:
        raise BadParameters(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    spread = spread_from_spreadset(K) if K is not None else None
    plane = plane_from_spreadset(K) if (K is not None and with_plane) else None
    return Built(M, K, spread, plane)


def _default_mode(M: MubSet) -> str:
    return "all-pairs" if M.dim <= ALL_PAIRS_LIMIT else "difference-class"


def _emit(rep: CheckReport, out) -> bool:
    print(rep.line(), file=out)
    return rep.passed


def _mub_mode(args, M):
    if args.mode in MUB_MODES:
        return args.mode
    return _default_mode(M)


def _plane_mode(args):
    return args.mode if args.mode in PLANE_MODES else "exhaustive"


def _write(path: str, text: str):
    Path(path).write_text(text)


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_build(args, out) -> int:
    b = build_family(args.family, args.p, args.n, args.s, args.k, with_plane=bool(args.plane_out))
    ok = _emit(verify_mub_set(b.mubset, _mub_mode(args, b.mubset), args.threads), out)
    if args.spread_out:
        if b.spread is None:
            raise BadParameters(f"family {args.family} has no symplectic spread to write")
        ok &= _emit(verify_symplectic_spread(b.spread), out)
    if args.plane_out:
        ok &= _emit(verify_plane_axioms(b.plane, _plane_mode(args), args.seed), out)
    if not ok:
        print("not writing output: verification failed", file=sys.stderr)
        return 1
    _write(args.out, formats.write_mubset(b.mubset))
    if args.spread_out:
        _write(args.spread_out, formats.write_spread(b.spread))
    if args.plane_out:
        _write(args.plane_out, formats.write_plane(b.plane))
    return 0


def _verify_text(text: str, args, out) -> bool:
    kind = formats.file_kind(text)
    if kind == "mubset":
        M = formats.read_mubset(text)
        return _emit(verify_mub_set(M, _mub_mode(args, M), args.threads), out)
    if kind == "spread":
        S = formats.read_spread(text)
        ok = _emit(verify_symplectic_spread(S), out)
        if ok:
            ok &= _emit(spreadset_from_spread(S).check(), out)
        return ok
    if kind == "orthospread":
        return _emit(verify_orthogonal_spread(formats.read_orthospread(text)), out)
    return _emit(verify_plane_axioms(formats.read_plane(text), _plane_mode(args), args.seed), out)


def cmd_verify(args, out) -> int:
    ok = _verify_text(Path(args.input).read_text(), args, out)
    if args.plane:
        ok &= _verify_text(Path(args.plane).read_text(), args, out)
    return 0 if ok else 1


def cmd_export(args, out) -> int:
    M = formats.read_mubset(Path(args.input).read_text())
    _write(args.out, "\n".join(formats.export_vectors(M)) + "\n")
    print(f"wrote {len(M.frames) * M.dim} vectors to {args.out}", file=out)
    return 0


def cmd_invariants(args, out) -> int:
    M = formats.read_mubset(Path(args.input).read_text())
    plane = formats.read_plane(Path(args.plane).read_text()) if args.plane else None
    rec = invariant_battery(M, plane, args.threads)
    out.write(rec.to_text())
    if args.out:
        _write(args.out, rec.to_text())
    return 0


def cmd_search(args, out) -> int:
    found = search_orthogonal_spreads(args.n, args.limit)
    ok = True
    for idx, S in enumerate(found):
        ok &= _emit(verify_orthogonal_spread(S), out)
        if args.out:
            path = Path(args.out)
            if idx:
                path = path.with_name(f"{path.stem}-{idx}{path.suffix}")
            _write(str(path), formats.write_orthospread(S))
    print(f"found {len(found)} orthogonal spread(s) of Z_2^{2 * args.n}", file=out)
    return 0 if ok else 1


# ----------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mubplanes", description="Exact MUB, spread and affine plane toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled plane checks")
        sp.add_argument("--mode", choices=MUB_MODES + PLANE_MODES,
                        help="verification mode (MUB sets: all-pairs | difference-class; planes: exhaustive | sampled)")

    b = sub.add_parser("build", help="construct a family, verify it, write files")
    b.add_argument("--family", required=True, choices=FAMILIES)
    b.add_argument("--p", type=int)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--s", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--out", required=True)
    b.add_argument("--spread-out")
    b.add_argument("--plane-out")
    common(b)

    v = sub.add_parser("verify", help="verify a MUBSET, SPREAD, ORTHOSPREAD or PLANE file")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--plane", help="also verify this PLANE file")
    common(v)

    e = sub.add_parser("export", help="write all member vectors of a MUBSET file")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--out", required=True)

    i = sub.add_parser("invariants", help="print the invariant record of a MUBSET file")
    i.add_argument("--in", dest="input", required=True)
    i.add_argument("--plane", help="attach this PLANE file")
    i.add_argument("--out")
    i.add_argument("--threads", type=int, default=1)

    s = sub.add_parser("search", help="search orthogonal spreads of Z_2^(2n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--limit", type=int, default=1)
    s.add_argument("--out")
    return ap


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "export": cmd_export,
            "invariants": cmd_invariants, "search": cmd_search}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args, out)
    except MubError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
