"""Integral and fractional clique tilings, their checks and text format.

Text format, one clique per line::

    # r=3
    0 1 2
    3 4 5 6

Fractional tilings put the exact weight first::

    # r=2 fractional
    1/2 0 1
    1/2 1 2
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import GraphParseError, InputError, InvariantViolation
from .graph import Graph, mask_of

logger = logging.getLogger(__name__)

Clique = tuple[int, ...]


def _normalise(cliques: Iterable[Iterable[int]]) -> tuple[Clique, ...]:
    return tuple(tuple(sorted(c)) for c in cliques)


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint cliques of size ``r`` or ``r + 1``."""

    r: int
    cliques: tuple[Clique, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cliques", _normalise(self.cliques))

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for c in self.cliques for v in c)

    @property
    def covered_count(self) -> int:
        return sum(len(c) for c in self.cliques)

    @property
    def covered_mask(self) -> int:
        return mask_of(self.covered)

    @property
    def is_pure(self) -> bool:
        return all(len(c) == self.r for c in self.cliques)

    def parts_of_size(self, size: int) -> list[Clique]:
        return [c for c in self.cliques if len(c) == size]

    def sorted(self) -> "Tiling":
        return Tiling(self.r, tuple(sorted(self.cliques)))

    def problems(self, g: Graph, pure: bool = False) -> list[str]:
        """Everything that keeps this from being a valid tiling of ``g``."""
        found = []
        seen: set[int] = set()
        allowed = {self.r} if pure else {self.r, self.r + 1}
        for c in self.cliques:
            if len(c) not in allowed:
                found.append(f"clique {c} has size {len(c)}, expected one of {sorted(allowed)}")
            if any(not 0 <= v < g.n for v in c):
                found.append(f"clique {c} has a vertex outside [0, {g.n})")
                continue
            if not g.is_clique(c):
                found.append(f"{c} is not a clique")
            shared = seen.intersection(c)
            if shared:
                found.append(f"clique {c} reuses vertices {sorted(shared)}")
            seen.update(c)
        return found

    def is_valid(self, g: Graph, pure: bool = False) -> bool:
        return not self.problems(g, pure)

    def is_spanning(self, g: Graph) -> bool:
        return self.is_pure and self.covered_count == g.n and self.is_valid(g, pure=True)

    def __len__(self) -> int:
        return len(self.cliques)


def ensure_valid(g: Graph, t: Tiling, pure: bool = False) -> None:
    problems = t.problems(g, pure)
    if problems:
        raise InputError(f"invalid tiling: {problems[0]}")


@dataclass(frozen=True)
class FractionalTiling:
    """Exact rational weights on ``K_r`` copies with per-vertex load at most one."""

    r: int
    support: tuple[Clique, ...] = ()
    weights: tuple[Fraction, ...] = ()
    optimum: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.support) != len(self.weights):
            raise InputError("support and weights must have the same length")
        object.__setattr__(self, "support", _normalise(self.support))
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))

    @classmethod
    def from_weights(cls, r: int, weights: dict[Clique, Fraction]) -> "FractionalTiling":
        items = sorted((tuple(sorted(k)), w) for k, w in weights.items() if w)
        return cls(r, tuple(k for k, _ in items), tuple(w for _, w in items))

    def vertex_weights(self) -> dict[int, Fraction]:
        load: dict[int, Fraction] = defaultdict(Fraction)
        for clique, w in zip(self.support, self.weights):
            for v in clique:
                load[v] += w
        return dict(load)

    def vertex_weight(self, v: int) -> Fraction:
        return self.vertex_weights().get(v, Fraction(0))

    @property
    def total_weight(self) -> Fraction:
        """``Σ_v w(v)``, which equals ``r · Σ_K w(K)``."""
        return sum((len(c) * w for c, w in zip(self.support, self.weights)), Fraction(0))

    def count_below(self, g: Graph, threshold: Fraction) -> int:
        """Number of vertices of ``g`` whose load is below ``threshold``."""
        load = self.vertex_weights()
        return sum(1 for v in range(g.n) if load.get(v, Fraction(0)) < threshold)

    def problems(self, g: Graph) -> list[str]:
        found = []
        for clique, w in zip(self.support, self.weights):
            if len(clique) != self.r:
                found.append(f"support set {clique} has size {len(clique)} != {self.r}")
            elif any(not 0 <= v < g.n for v in clique) or not g.is_clique(clique):
                found.append(f"support set {clique} is not a clique of the graph")
            if not 0 <= w <= 1:
                found.append(f"weight {w} of {clique} outside [0, 1]")
        for v, load in sorted(self.vertex_weights().items()):
            if load > 1:
                found.append(f"vertex {v} carries load {load} > 1")
        return found

    def is_valid(self, g: Graph) -> bool:
        return not self.problems(g)


def check_fractional(g: Graph, ft: FractionalTiling) -> None:
    problems = ft.problems(g)
    if problems:
        raise InvariantViolation(f"fractional tiling is not valid: {problems[0]}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_tiling(t: Tiling) -> str:
    lines = [f"# r={t.r}"]
    lines.extend(" ".join(map(str, c)) for c in t.cliques)
    return "\n".join(lines) + "\n"


def format_fractional(ft: FractionalTiling) -> str:
    lines = [f"# r={ft.r} fractional total={format_rational(ft.total_weight)}"]
    lines.extend(
        f"{format_rational(w)} " + " ".join(map(str, c)) for c, w in zip(ft.support, ft.weights)
    )
    return "\n".join(lines) + "\n"


def _read_header(line: str, line_number: int) -> int:
    for token in line.lstrip("#").split():
        if token.startswith("r="):
            try:
                return int(token[2:])
            except ValueError:
                break
    raise GraphParseError(f"expected '# r=<int>' header, got {line.strip()!r}", line_number)


def parse_tiling(lines: list[str]) -> Tiling:
    if not lines:
        raise GraphParseError("empty tiling file")
    r = _read_header(lines[0], 1)
    cliques = []
    for line_number, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            cliques.append(tuple(int(t) for t in line.split()))
        except ValueError:
            raise GraphParseError(f"malformed clique line {line!r}", line_number) from None
    return Tiling(r, tuple(cliques))


def parse_fractional(lines: list[str]) -> FractionalTiling:
    if not lines:
        raise GraphParseError("empty fractional tiling file")
    r = _read_header(lines[0], 1)
    support, weights = [], []
    for line_number, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        try:
            weights.append(Fraction(head))
            support.append(tuple(int(t) for t in rest))
        except ValueError:
            raise GraphParseError(f"malformed weighted clique line {line!r}", line_number) from None
    return FractionalTiling(r, tuple(support), tuple(weights))


def write_tiling(t: Tiling, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_tiling(t), encoding="utf-8")


def read_tiling(path: str | Path) -> Tiling:
    return parse_tiling(Path(path).read_text(encoding="utf-8").splitlines())


def write_fractional(ft: FractionalTiling, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_fractional(ft), encoding="utf-8")


def read_fractional(path: str | Path) -> FractionalTiling:
    return parse_fractional(Path(path).read_text(encoding="utf-8").splitlines())
