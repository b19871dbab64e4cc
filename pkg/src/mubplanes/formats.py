"""Line-based text formats: MUBSET, SPREAD / ORTHOSPREAD, PLANE and vector export.

Blank lines and lines starting with '#' are ignored by every reader.  In
MUBSET rows a '.' marks a zero entry (frames with partial support); an
optional ``PROVENANCE key=value ...`` line may follow ``DIM``.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

import numpy as np

from .cyclo import Root
from .errors import ParseError
from .frames import MubSet, Orthoframe, standard_frame
from .geometry import OrthogonalSpread, Subspace, SymplecticSpread
from .gf import prime_factors
from .planes import AffinePlane


class _Lines:
    """Cursor over meaningful lines, remembering 1-based line numbers."""

    def __init__(self, text: str):
        self.items = [(k + 1, s.strip()) for k, s in enumerate(text.splitlines())
                      if s.strip() and not s.lstrip().startswith("#")]
        self.pos = 0
        self.last = len(text.splitlines())

    def next(self, what: str) -> tuple[int, str]:
        if self.pos >= len(self.items):
            raise ParseError(f"unexpected end of file, expected {what}", self.last + 1)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def peek(self) -> str | None:
        return self.items[self.pos][1] if self.pos < len(self.items) else None

    def done(self):
        if self.pos < len(self.items):
            lineno, s = self.items[self.pos]
            raise ParseError(f"trailing content {s[:40]!r}", lineno)


def _fields(lineno: int, line: str, head: str, keys: Iterable[str]) -> dict[str, str]:
    parts = line.split()
    if not parts or parts[0] != head:
        raise ParseError(f"expected {head!r}, got {line[:40]!r}", lineno)
    out = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise ParseError(f"malformed field {tok!r}", lineno)
        k, v = tok.split("=", 1)
        out[k] = v
    missing = [k for k in keys if k not in out]
    if missing:
        raise ParseError(f"{head} line lacks {', '.join(missing)}", lineno)
    return out


def _int(lineno: int, s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"{what} is not an integer: {s!r}", lineno) from None


def _int_row(lineno: int, line: str, width: int, lo: int, hi: int, dot: bool = False) -> list[int]:
    toks = line.split()
    if len(toks) != width:
        raise ParseError(f"expected {width} entries, got {len(toks)}", lineno)
    row = []
    for t in toks:
        if dot and t == ".":
            row.append(-1)
            continue
        v = _int(lineno, t, "entry")
        if not lo <= v < hi:
            raise ParseError(f"entry {v} outside [{lo},{hi})", lineno)
        row.append(v)
    return row


def _detect(text: str) -> str:
    for s in text.splitlines():
        s = s.strip()
        if s and not s.startswith("#"):
            return s.split()[0]
    raise ParseError("empty file", 1)


def file_kind(text: str) -> str:
    head = _detect(text)
    kinds = {"MUBSET": "mubset", "SPREAD": "spread", "ORTHOSPREAD": "orthospread", "PLANE": "plane"}
    if head not in kinds:
        raise ParseError(f"unknown file type {head!r}", 1)
    return kinds[head]


# ----------------------------------------------------------------------
# MUBSET
# ----------------------------------------------------------------------

_KEY = re.compile(r"^[^\s=]+$")
_TOKEN = re.compile(r"^\S+$")


def write_mubset(M: MubSet) -> str:
    out = ["MUBSET version=1",
           "ROOT i" if M.root.kind == "i" else f"ROOT zeta p={M.root.order}",
           f"DIM N={M.dim}"]
    if M.provenance:
        items = []
        for k in sorted(M.provenance):
            v = str(M.provenance[k])
            if not (_KEY.match(k) and _TOKEN.match(v)):
                raise ValueError(f"provenance entry {k}={v!r} is not a single token")
            items.append(f"{k}={v}")
        out.append("PROVENANCE " + " ".join(items))
    out.append(f"FRAMES {len(M.frames)}")
    for F in M.frames:
        if F.kind == "standard":
            out.append("FRAME standard")
            continue
        if F.label and not _TOKEN.match(F.label):
            raise ValueError(f"frame label {F.label!r} is not a single token")
        out.append(f"FRAME exp label={F.label}")
        for row in F.table:
            out.append(" ".join("." if e < 0 else str(int(e)) for e in row))
    return "\n".join(out) + "\n"


def read_mubset(text: str) -> MubSet:
    cur = _Lines(text)
    ln, s = cur.next("MUBSET header")
    hdr = _fields(ln, s, "MUBSET", ["version"])
    if hdr["version"] != "1":
        raise ParseError(f"unsupported version {hdr['version']}", ln)
    ln, s = cur.next("ROOT line")
    parts = s.split()
    if parts == ["ROOT", "i"]:
        root = Root.i()
    elif len(parts) == 3 and parts[:2] == ["ROOT", "zeta"] and parts[2].startswith("p="):
        p = _int(ln, parts[2][2:], "p")
        if p < 2 or prime_factors(p) != [p]:
            raise ParseError(f"p={p} is not prime", ln)
        root = Root.zeta(p)
    else:
        raise ParseError(f"malformed ROOT line {s!r}", ln)
    ln, s = cur.next("DIM line")
    N = _int(ln, _fields(ln, s, "DIM", ["N"])["N"], "N")
    if N < 1:
        raise ParseError("N must be positive", ln)
    prov: dict = {}
    if (cur.peek() or "").startswith("PROVENANCE"):
        ln, s = cur.next("PROVENANCE")
        prov = _fields(ln, s, "PROVENANCE", [])
    ln, s = cur.next("FRAMES line")
    parts = s.split()
    if len(parts) != 2 or parts[0] != "FRAMES":
        raise ParseError(f"expected 'FRAMES <count>', got {s!r}", ln)
    count = _int(ln, parts[1], "frame count")
    q = root.order
    frames = []
    for _ in range(count):
        ln, s = cur.next("FRAME line")
        if s == "FRAME standard":
            frames.append(standard_frame(N, root))
            continue
        if not s.startswith("FRAME exp"):
            raise ParseError(f"expected a FRAME line, got {s[:40]!r}", ln)
        f = _fields(ln, s[len("FRAME "):], "exp", ["label"])
        rows = [_int_row(*cur.next(f"row of frame {f['label']}"), N, 0, q, dot=True) for _ in range(N)]
        frames.append(Orthoframe(N, root, f["label"], np.array(rows, dtype=np.int64)))
    cur.done()
    return MubSet(N, root, frames, prov)


# ----------------------------------------------------------------------
# SPREAD / ORTHOSPREAD
# ----------------------------------------------------------------------

def _write_members(head: str, p: int, n: int, members) -> str:
    out = [f"{head} p={p} n={n}"]
    for m in members:
        out.append("MEMBER")
        out.extend(" ".join(map(str, row)) for row in m.basis)
    return "\n".join(out) + "\n"


def write_spread(S: SymplecticSpread) -> str:
    return _write_members("SPREAD", S.p, S.n, S.members)


def write_orthospread(S: OrthogonalSpread) -> str:
    return _write_members("ORTHOSPREAD", 2, S.n, S.members)


def _read_members(text: str, head: str, fixed_p: int | None):
    cur = _Lines(text)
    ln, s = cur.next(f"{head} header")
    f = _fields(ln, s, head, ["n"] if fixed_p else ["p", "n"])
    p = _int(ln, f.get("p", str(fixed_p)), "p")
    n = _int(ln, f["n"], "n")
    if fixed_p and p != fixed_p:
        raise ParseError(f"{head} requires p={fixed_p}", ln)
    if p < 2 or prime_factors(p) != [p] or n < 1:
        raise ParseError(f"bad parameters p={p} n={n}", ln)
    members = []
    while cur.peek() is not None:
        ln, s = cur.next("MEMBER")
        if s != "MEMBER":
            raise ParseError(f"expected MEMBER, got {s[:40]!r}", ln)
        rows = [_int_row(*cur.next("member row"), 2 * n, 0, p) for _ in range(n)]
        members.append(Subspace.span(rows, p, 2 * n))
    return p, n, tuple(members)


def read_spread(text: str) -> SymplecticSpread:
    p, n, members = _read_members(text, "SPREAD", None)
    return SymplecticSpread(p, n, members)


def read_orthospread(text: str) -> OrthogonalSpread:
    _, n, members = _read_members(text, "ORTHOSPREAD", 2)
    return OrthogonalSpread(n, members)


# ----------------------------------------------------------------------
# PLANE
# ----------------------------------------------------------------------

def write_plane(P: AffinePlane) -> str:
    out = [f"PLANE order={P.order}"]
    out.extend(" ".join(map(str, line)) for line in P.lines)
    return "\n".join(out) + "\n"


def read_plane(text: str) -> AffinePlane:
    """Lines are kept in file order; consecutive blocks of N form the parallel classes."""
    cur = _Lines(text)
    ln, s = cur.next("PLANE header")
    N = _int(ln, _fields(ln, s, "PLANE", ["order"])["order"], "order")
    if N < 2:
        raise ParseError("order must be at least 2", ln)
    factors = prime_factors(N)
    if len(set(factors)) != 1:
        raise ParseError(f"order {N} is not a prime power", ln)
    lines = []
    while cur.peek() is not None:
        lines.append(_int_row(*cur.next("line"), N, 0, N * N))
    return AffinePlane(N, np.array(lines, dtype=np.int64).reshape(-1, N), factors[0], {"construction": "file"})


# ----------------------------------------------------------------------
# vector export
# ----------------------------------------------------------------------

def export_vectors(M: MubSet) -> Iterator[str]:
    """All N(N+1) unnormalised member vectors, one per row."""
    root = "i" if M.root.kind == "i" else f"zeta_{M.root.order}"
    yield f"# {len(M.frames) * M.dim} vectors of C^{M.dim}; entry k stands for {root}^k, '.' for 0"
    yield f"# rows are unnormalised: divide each by sqrt({M.dim})"
    yield f"VECTORS N={M.dim} count={len(M.frames) * M.dim} root={root}"
    for F in M.frames:
        for row in F.exponents():
            yield " ".join("." if e < 0 else str(int(e)) for e in row)
