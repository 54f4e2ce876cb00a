"""
Text instance files: one header line (``digraph n m``, ``ugraph n m`` or
``matrix r c``) followed by the records. Blank lines and ``#`` comments are ignored.
"""

import hashlib
import logging
from dataclasses import dataclass
from enum import StrEnum

from app.digraph import DiGraph, UGraph
from app.errors import InputError

logger = logging.getLogger(__name__)


class InstanceKind(StrEnum):
    DIGRAPH = "digraph"
    UGRAPH = "ugraph"
    MATRIX = "matrix"


@dataclass(frozen=True)
class InstanceFile:
    kind: InstanceKind
    digraph: DiGraph | None = None
    ugraph: UGraph | None = None
    matrix: tuple[tuple[int, ...], ...] | None = None
    columns: int = 0


def _tokens(text: str) -> list[tuple[int, list[tuple[int, str]]]]:
    """Meaningful lines as (line number, [(column, token)]), both 1-based."""
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = []
        column = 0
        for part in line.split():
            column = line.index(part, column)
            tokens.append((column + 1, part))
            column += len(part)
        if tokens:
            out.append((number, tokens))
    return out


def _integer(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError as e:
        raise InputError(f"expected an integer, found {token!r}", "PARSE_ERROR", line, column) from e


def parse_instance(text: str) -> InstanceFile:
    lines = _tokens(text)
    if not lines:
        raise InputError("empty instance: expected a header 'digraph n m', 'ugraph n m' or 'matrix r c'")
    number, header = lines[0]
    if len(header) != 3:
        raise InputError("header needs a kind and two counts", "PARSE_ERROR", number, header[0][0])
    kind_token = header[0][1].lower()
    if kind_token not in {k.value for k in InstanceKind}:
        raise InputError(f"unknown instance kind {header[0][1]!r}", "PARSE_ERROR", number, header[0][0])
    kind = InstanceKind(kind_token)
    first = _integer(header[1][1], number, header[1][0])
    second = _integer(header[2][1], number, header[2][0])
    if first < 0 or second < 0:
        raise InputError("counts must be nonnegative", "RANGE_ERROR", number, header[1][0])
    records = lines[1:]
    if len(records) != (second if kind != InstanceKind.MATRIX else first):
        expected = second if kind != InstanceKind.MATRIX else first
        at = records[expected][0] if len(records) > expected else number
        raise InputError(f"expected {expected} records, found {len(records)}", "PARSE_ERROR", at, 1)

    match kind:
        case InstanceKind.MATRIX:
            rows = []
            for line, tokens in records:
                if len(tokens) != second:
                    raise InputError(f"expected {second} entries, found {len(tokens)}", "PARSE_ERROR", line, 1)
                rows.append(tuple(_integer(tok, line, col) for col, tok in tokens))
            return InstanceFile(kind, matrix=tuple(rows), columns=second)
        case _:
            if first < 1:
                raise InputError("a graph needs at least one vertex", "RANGE_ERROR", number, header[1][0])
            edges = []
            for line, tokens in records:
                if len(tokens) != 2:
                    raise InputError(f"expected 'tail head', found {len(tokens)} fields", "PARSE_ERROR", line, 1)
                ends = []
                for col, tok in tokens:
                    v = _integer(tok, line, col)
                    if not 0 <= v < first:
                        raise InputError(f"vertex {v} outside 0..{first - 1}", "RANGE_ERROR", line, col)
                    ends.append(v)
                edges.append((ends[0], ends[1]))
            if kind == InstanceKind.DIGRAPH:
                return InstanceFile(kind, digraph=DiGraph(first, tuple(edges)))
            return InstanceFile(kind, ugraph=UGraph(first, tuple(edges)))


def render(instance: InstanceFile) -> str:
    """Canonical text form with LF line endings."""
    match instance.kind:
        case InstanceKind.MATRIX:
            rows = instance.matrix or ()
            lines = [f"matrix {len(rows)} {instance.columns}"] + [" ".join(str(x) for x in row) for row in rows]
        case InstanceKind.DIGRAPH:
            G = instance.digraph
            assert G is not None
            lines = [f"digraph {G.n} {G.m}"] + [f"{t} {h}" for t, h in G.edges]
        case _:
            U = instance.ugraph
            assert U is not None
            lines = [f"ugraph {U.n} {U.m}"] + [f"{u} {v}" for u, v in U.edges]
    return "\n".join(lines) + "\n"


def digest(instance: InstanceFile) -> str:
    return hashlib.sha256(render(instance).encode()).hexdigest()


def digraph_instance(G: DiGraph) -> InstanceFile:
    return InstanceFile(InstanceKind.DIGRAPH, digraph=G)


def ugraph_instance(U: UGraph) -> InstanceFile:
    return InstanceFile(InstanceKind.UGRAPH, ugraph=U)


def matrix_instance(rows: tuple[tuple[int, ...], ...], columns: int) -> InstanceFile:
    return InstanceFile(InstanceKind.MATRIX, matrix=rows, columns=columns)
