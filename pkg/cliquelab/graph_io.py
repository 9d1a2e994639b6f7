"""Reading and writing graphs.

Two formats are supported:

* ``edgelist``: first line ``n <count>``, then one ``u v`` pair per line,
  0-based. Blank lines and lines starting with ``#`` are ignored.
* ``dimacs``: ``p edge <n> <m>`` followed by ``e u v`` lines with 1-based
  indices. ``c`` lines are comments.

Writers emit sorted edges so output is byte-stable.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

from .errors import GraphParseError, InputError
from .graph import Graph

logger = logging.getLogger(__name__)

FORMATS = ("edgelist", "dimacs")


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    return "dimacs" if suffix in (".dimacs", ".col", ".clq") else "edgelist"


def _parse_int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"expected an integer, got {token!r}", line_number) from None


def _add_edge(rows: list[int], n: int, u: int, v: int, line_number: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise GraphParseError(f"edge ({u}, {v}) has an index outside [0, {n})", line_number)
    if u == v:
        raise GraphParseError(f"self-loop at vertex {u}", line_number)
    if rows[u] >> v & 1:
        raise GraphParseError(f"duplicate edge ({u}, {v})", line_number)
    rows[u] |= 1 << v
    rows[v] |= 1 << u


def parse_edgelist(lines: Iterable[str]) -> Graph:
    n = None
    rows: list[int] = []
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "n":
                raise GraphParseError(f"expected header 'n <count>', got {line!r}", line_number)
            n = _parse_int(tokens[1], line_number)
            if n < 0:
                raise GraphParseError(f"negative vertex count {n}", line_number)
            rows = [0] * n
            continue
        if len(tokens) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", line_number)
        u, v = (_parse_int(t, line_number) for t in tokens)
        _add_edge(rows, n, u, v, line_number)
    if n is None:
        raise GraphParseError("missing header 'n <count>'")
    return Graph(n, tuple(rows), validate=False)


def parse_dimacs(lines: Iterable[str]) -> Graph:
    n = m = None
    rows: list[int] = []
    seen = 0
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if n is not None:
                raise GraphParseError("second problem line", line_number)
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise GraphParseError(f"expected 'p edge <n> <m>', got {line!r}", line_number)
            n, m = _parse_int(tokens[2], line_number), _parse_int(tokens[3], line_number)
            rows = [0] * n
        elif tokens[0] == "e":
            if n is None:
                raise GraphParseError("edge line before problem line", line_number)
            if len(tokens) != 3:
                raise GraphParseError(f"expected 'e u v', got {line!r}", line_number)
            u, v = (_parse_int(t, line_number) - 1 for t in tokens[1:])
            _add_edge(rows, n, u, v, line_number)
            seen += 1
            if seen > m:
                raise GraphParseError(f"more edge lines than the declared {m}", line_number)
        else:
            raise GraphParseError(f"unknown line type {tokens[0]!r}", line_number)
    if n is None:
        raise GraphParseError("missing problem line 'p edge <n> <m>'")
    if seen != m:
        raise GraphParseError(f"header declares {m} edges but {seen} were listed")
    return Graph(n, tuple(rows), validate=False)


def format_edgelist(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def format_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.edge_count}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path, fmt: str | None = None) -> Graph:
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise InputError(f"unknown graph format {fmt!r}; use one of {FORMATS}")
    with open(path, "r", encoding="utf-8") as f:
        lines = f.readlines()
    g = parse_dimacs(lines) if fmt == "dimacs" else parse_edgelist(lines)
    logger.debug(f"Read {g!r} from {path} ({fmt})")
    return g


def write_graph(g: Graph, path: str | Path, fmt: str | None = None) -> None:
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise InputError(f"unknown graph format {fmt!r}; use one of {FORMATS}")
    text = format_dimacs(g) if fmt == "dimacs" else format_edgelist(g)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.debug(f"Wrote {g!r} to {path} ({fmt})")
