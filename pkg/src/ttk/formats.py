"""Text formats: .trn, .idx, .shp, .cat and .mseq. Vertices are 1-indexed on disk."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .iso import CanonicalForm
from .msequence import MSequence
from .product import IndexedTournament, ShapeVector
from .tournament import Tournament, backward_graph


class FormatError(ValueError):
    pass


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {no}: expected an integer, got {tok!r}") from None


# .trn ---------------------------------------------------------------------------------


def dump_trn(T: Tournament, order: Sequence[int] | None = None) -> str:
    """``T`` as backward pairs under ``order`` (identity unless given)."""
    order = tuple(range(T.n)) if order is None else tuple(order)
    out = [f"T {T.n}"]
    if order != tuple(range(T.n)):
        out.append("order " + " ".join(str(v + 1) for v in order))
    for i, j in sorted(backward_graph(T, order).pairs):
        out.append(f"b {i + 1} {j + 1}")
    return "\n".join(out) + "\n"


def parse_trn(text: str) -> tuple[Tournament, tuple[int, ...]]:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "T" or len(lines[0][1]) != 2:
        raise FormatError("first line must be 'T <n>'")
    n = _int(lines[0][1][1], lines[0][0])
    if n < 0:
        raise FormatError("vertex count must be nonnegative")
    order = tuple(range(n))
    rest = lines[1:]
    if rest and rest[0][1][0] == "order":
        no, toks = rest[0]
        order = tuple(_int(t, no) - 1 for t in toks[1:])
        if sorted(order) != list(range(n)):
            raise FormatError(f"line {no}: order must be a permutation of 1..{n}")
        rest = rest[1:]
    pairs: set[tuple[int, int]] = set()
    for no, toks in rest:
        if toks[0] != "b" or len(toks) != 3:
            raise FormatError(f"line {no}: expected 'b <i> <j>'")
        i, j = _int(toks[1], no), _int(toks[2], no)
        if not 1 <= i < j <= n:
            raise FormatError(f"line {no}: need 1 <= i < j <= {n}")
        if (i, j) in pairs:
            raise FormatError(f"line {no}: duplicate pair ({i}, {j})")
        pairs.add((i, j))
    pos = {v: p for p, v in enumerate(order)}

    def beats(u: int, v: int) -> bool:
        a, b = pos[u] + 1, pos[v] + 1
        return (b, a) in pairs if a > b else (a, b) not in pairs

    return Tournament.from_predicate(n, beats), order


def read_trn(path: str | Path) -> tuple[Tournament, tuple[int, ...]]:
    return parse_trn(Path(path).read_text(encoding="utf-8"))


# .idx and .shp -------------------------------------------------------------------------------


def dump_idx(index: Sequence[int]) -> str:
    return "".join(f"v {v + 1} {f}\n" for v, f in enumerate(index))


def parse_idx(text: str, n: int | None = None) -> tuple[int, ...]:
    found: dict[int, int] = {}
    for no, toks in _lines(text):
        if toks[0] != "v" or len(toks) != 3:
            raise FormatError(f"line {no}: expected 'v <vertex> <index>'")
        v, f = _int(toks[1], no), _int(toks[2], no)
        if v in found:
            raise FormatError(f"line {no}: vertex {v} listed twice")
        found[v] = f
    size = len(found) if n is None else n
    if sorted(found) != list(range(1, size + 1)):
        raise FormatError(f"index map must cover vertices 1..{size} exactly")
    return tuple(found[v] for v in range(1, size + 1))


def dump_indexed(T: IndexedTournament) -> tuple[str, str]:
    return dump_trn(T.tournament), dump_idx(T.index)


def dump_shp(shape: ShapeVector) -> str:
    return f"v {''.join(map(str, shape.v))}\neta {' '.join(map(str, shape.eta))}\n"


def _bits(tok: Sequence[str]) -> tuple[int, ...]:
    text = "".join(tok)
    if any(ch not in "01" for ch in text):
        raise FormatError(f"bit vector may only contain 0 and 1: {text!r}")
    return tuple(int(ch) for ch in text)


def parse_shp(text: str) -> ShapeVector:
    lines = list(_lines(text))
    if len(lines) not in (1, 2) or lines[0][1][0] != "v":
        raise FormatError("shape file needs 'v <bits>' then 'eta <counts>'")
    v = _bits(lines[0][1][1:])
    eta: tuple[int, ...] = ()
    if len(lines) == 2:
        no, toks = lines[1]
        if toks[0] != "eta":
            raise FormatError(f"line {no}: expected 'eta <counts>'")
        eta = tuple(_int(t, no) for t in toks[1:])
    return ShapeVector(v, eta)


# .cat ---------------------------------------------------------------------------------------

EMPTY_CODE = "-"


def dump_cat(n: int, forms: Sequence[CanonicalForm]) -> str:
    body = "".join(f"{f.hex or EMPTY_CODE}\n" for f in forms)
    return f"CAT {n} {len(forms)}\n{body}"


def parse_cat(text: str) -> tuple[int, list[CanonicalForm]]:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "CAT" or len(lines[0][1]) != 3:
        raise FormatError("first line must be 'CAT <n> <count>'")
    n, count = (_int(t, lines[0][0]) for t in lines[0][1][1:])
    forms = []
    for no, toks in lines[1:]:
        code = "" if toks[0] == EMPTY_CODE else toks[0].lower()
        try:
            CanonicalForm(n, code).decode()
        except ValueError as exc:
            raise FormatError(f"line {no}: {exc}") from None
        forms.append(CanonicalForm(n, code))
    if len(forms) != count:
        raise FormatError(f"header promises {count} forms, found {len(forms)}")
    if forms != sorted(forms):
        raise FormatError("catalog forms must be ascending")
    return n, forms


# .mseq ----------------------------------------------------------------------------------------


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def dump_mseq(chi: MSequence, host_path: str) -> str:
    shape = chi.shape
    out = [f"host {host_path}",
           f"shape {''.join(map(str, shape.v))} ; {' '.join(map(str, shape.eta))}",
           f"params c={_frac(chi.c)} lambda={_frac(chi.lam)}"]
    if chi.tr_host is not None:
        out.append(f"tr {chi.tr_host} {chi.tr_kind}")
    for i, cell in enumerate(chi.cells, start=1):
        out.append(f"cell {i} " + " ".join(str(v + 1) for v in sorted(cell)))
    for i, blocks in enumerate(chi.blocks, start=1):
        if shape.v[i - 1]:
            for b, block in enumerate(blocks, start=1):
                out.append(f"block {i} {b} " + " ".join(str(v + 1) for v in sorted(block)))
    return "\n".join(out) + "\n"


def _parse_frac(tok: str, no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {no}: bad fraction {tok!r}") from None


def parse_mseq(text: str, base: Path | None = None) -> MSequence:
    host = shape = None
    c = lam = None
    tr_host, tr_kind = None, "exact"
    cells: dict[int, list[int]] = {}
    blocks: dict[int, dict[int, list[int]]] = {}
    for no, toks in _lines(text):
        key = toks[0]
        if key == "host":
            path = Path(" ".join(toks[1:]))
            if base is not None and not path.is_absolute():
                path = base / path
            host = read_trn(path)[0]
        elif key == "shape":
            rest = " ".join(toks[1:]).split(";")
            if len(rest) != 2:
                raise FormatError(f"line {no}: expected 'shape <bits> ; <eta>'")
            shape = ShapeVector(_bits(rest[0].split()),
                                tuple(_int(t, no) for t in rest[1].split()))
        elif key == "params":
            for tok in toks[1:]:
                name, _, val = tok.partition("=")
                if name == "c":
                    c = _parse_frac(val, no)
                elif name == "lambda":
                    lam = _parse_frac(val, no)
                else:
                    raise FormatError(f"line {no}: unknown parameter {name!r}")
        elif key == "tr":
            tr_host = _int(toks[1], no)
            tr_kind = toks[2] if len(toks) > 2 else "exact"
        elif key == "cell":
            i = _int(toks[1], no)
            if i in cells:
                raise FormatError(f"line {no}: cell {i} listed twice")
            cells[i] = [_int(t, no) - 1 for t in toks[2:]]
        elif key == "block":
            i, b = _int(toks[1], no), _int(toks[2], no)
            if b in blocks.setdefault(i, {}):
                raise FormatError(f"line {no}: block {i}.{b} listed twice")
            blocks[i][b] = [_int(t, no) - 1 for t in toks[3:]]
        else:
            raise FormatError(f"line {no}: unknown record {key!r}")
    if host is None or shape is None or c is None or lam is None:
        raise FormatError("m-sequence needs host, shape and params lines")
    if sorted(cells) != list(range(1, shape.m + 1)):
        raise FormatError(f"cells must be numbered 1..{shape.m}")
    layout = []
    for i in range(1, shape.m + 1):
        if shape.v[i - 1]:
            bl = blocks.get(i, {})
            if sorted(bl) != list(range(1, len(bl) + 1)) or not bl:
                raise FormatError(f"cell {i}: blocks must be numbered 1..k")
            parts = [bl[b] for b in sorted(bl)]
            if sorted(v for p in parts for v in p) != sorted(cells[i]):
                raise FormatError(f"cell {i}: blocks do not partition the cell")
            layout.append(parts)
        else:
            if i in blocks:
                raise FormatError(f"cell {i} is a 0-cell and cannot have blocks")
            layout.append([cells[i]])
    return MSequence.from_blocks(host, shape, layout, c, lam, tr_host, tr_kind)


def read_mseq(path: str | Path) -> MSequence:
    path = Path(path)
    return parse_mseq(path.read_text(encoding="utf-8"), path.parent)
