"""
Readers and writers for the text formats the command line accepts.

Graph files: one record per line, `v <name>` (vertex), `e <a> <b>` (edge),
`l <a>` (loop); `#` starts a comment. Endpoints of edges and loops are
declared implicitly.

DOW files: one double occurrence word per line; letters are single
characters, or whitespace-separated tokens when any label is longer.

Matroid files: `rank <r>` followed by one column per line, either a bare
bitstring or `<label> <bitstring>`; or a single `graphic K4|K5|K33` line,
or `fano`.

Circuit lists: JSON `{"classes": [[...]], "circuits": [[...]]}`.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from errors import DomainError, ParseError
from exactalg import GF2, ExactMatrix, rref
from graph import LoopedGraph
from models import CircuitListModel
from multimatroid import BinaryMatroidRep, SemiMultimatroid, fano

PathLike = Union[str, Path]


def _lines(path: PathLike) -> list[tuple[int, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", source=str(path)) from exc
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


# ----------------------------------------------------------------------
# Graphs
# ----------------------------------------------------------------------

def parse_graph_text(lines: list[tuple[int, str]], source: str = "<text>") -> LoopedGraph:
    vertices: list = []
    edges = []
    loops = []

    def declare(v: str) -> None:
        if v not in vertices:
            vertices.append(v)

    for number, line in lines:
        parts = line.split()
        tag, args = parts[0].lower(), parts[1:]
        if tag == "v" and len(args) == 1:
            declare(args[0])
        elif tag == "e" and len(args) == 2:
            declare(args[0])
            declare(args[1])
            edges.append((args[0], args[1]))
        elif tag == "l" and len(args) == 1:
            declare(args[0])
            loops.append(args[0])
        else:
            raise ParseError(f"cannot read graph record {line!r}", line=number, source=source)
    if not vertices:
        raise ParseError("graph has no vertices", source=source)
    try:
        return LoopedGraph(vertices, edges, loops)
    except DomainError as exc:
        raise ParseError(str(exc), source=source) from exc


def read_graph(path: PathLike) -> LoopedGraph:
    return parse_graph_text(_lines(path), str(path))


def format_graph(g: LoopedGraph) -> str:
    out = [f"v {v}" for v in g.vertices]
    out += [f"e {a} {b}" for a, b in g.edges()]
    out += [f"l {v}" for v in g.vertices if g.has_loop(v)]
    return "\n".join(out) + "\n"


def write_graph(g: LoopedGraph, path: PathLike) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")


# ----------------------------------------------------------------------
# Double occurrence words
# ----------------------------------------------------------------------

def read_dow(path: PathLike) -> list[str]:
    words = [line for _, line in _lines(path)]
    if not words:
        raise ParseError("no double occurrence words", source=str(path))
    return words


def write_dow(words: list[str], path: PathLike) -> None:
    Path(path).write_text("\n".join(words) + "\n", encoding="utf-8")


# ----------------------------------------------------------------------
# Binary matroids
# ----------------------------------------------------------------------

def standard_form(columns: dict[str, tuple[int, ...]], rank_hint: int) -> BinaryMatroidRep:
    """Row-reduce arbitrary GF(2) columns to (I | A), pivots first."""
    labels = list(columns)
    rows = list(range(rank_hint))
    m = ExactMatrix(rows, labels, [[columns[c][i] for c in labels] for i in rows], GF2)
    reduced, pivots = rref(m)
    others = [c for c in labels if c not in pivots]
    a = [[reduced.entry(rows[k], c) for c in others] for k in range(len(pivots))]
    return BinaryMatroidRep(tuple(pivots) + tuple(others), tuple(map(tuple, a)))


def parse_matroid_text(lines: list[tuple[int, str]], source: str = "<text>") -> BinaryMatroidRep:
    from recognize import graphic_matroid

    if not lines:
        raise ParseError("empty matroid file", source=source)
    number, first = lines[0]
    head = first.split()
    if head[0].lower() == "fano" and len(lines) == 1:
        return fano()
    if head[0].lower() == "graphic" and len(head) == 2 and len(lines) == 1:
        try:
            return graphic_matroid(head[1]).rep
        except DomainError as exc:
            raise ParseError(str(exc), line=number, source=source) from exc
    if head[0].lower() != "rank" or len(head) != 2 or not head[1].isdigit():
        raise ParseError("expected `rank <r>`, `graphic <name>` or `fano`", line=number, source=source)
    r = int(head[1])
    columns: dict = {}
    for number, line in lines[1:]:
        parts = line.split()
        label, bits = (parts[0], parts[1]) if len(parts) == 2 else (f"e{len(columns) + 1}", parts[0])
        if len(parts) > 2 or len(bits) != r or set(bits) - {"0", "1"}:
            raise ParseError(f"column must be a {r}-bit string", line=number, source=source)
        if label in columns:
            raise ParseError(f"duplicate element {label!r}", line=number, source=source)
        columns[label] = tuple(int(b) for b in bits)
    if not columns:
        raise ParseError("matroid has no elements", source=source)
    return standard_form(columns, r)


def read_matroid(path: PathLike) -> BinaryMatroidRep:
    return parse_matroid_text(_lines(path), str(path))


def format_matroid(m: BinaryMatroidRep) -> str:
    out = [f"rank {m.rank}"]
    for e in m.elements:
        out.append(f"{e} {''.join(str(int(x)) for x in m.column(e))}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# Circuit lists
# ----------------------------------------------------------------------

def read_circuit_list(path: PathLike) -> SemiMultimatroid:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        model = CircuitListModel.model_validate(data)
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", source=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, source=str(path)) from exc
    except ValidationError as exc:
        raise ParseError(f"not a circuit list: {exc.errors()[0]['msg']}", source=str(path)) from exc
    try:
        return SemiMultimatroid.from_circuit_list(model.model_dump(), name=Path(path).stem)
    except DomainError as exc:
        raise ParseError(str(exc), source=str(path)) from exc


def write_circuit_list(z: SemiMultimatroid, path: PathLike) -> None:
    model = CircuitListModel.model_validate(z.to_circuit_list())
    Path(path).write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
