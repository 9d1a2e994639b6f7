"""Partitions, regularity checks and the two-threshold reduced multigraph.

Cluster pairs with density at least ``1/2 + β`` get two edges, pairs with
density at least ``β`` get one. Regularity is never assumed: it is checked
exhaustively on micro instances or sampled.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil
from pathlib import Path
from typing import Iterable

from dtos.params import RegularityParams, parse_rational

from .errors import GraphParseError, InputError, ResourceGuardError
from .graph import Graph, check_vertex_set, cross_edge_count, mask_of, pair_density

logger = logging.getLogger(__name__)

REGULARITY_MODES = ("exhaustive", "sampled")
MAX_EXHAUSTIVE_SIDE = 16


@dataclass(frozen=True)
class Partition:
    """Exceptional set ``V_0`` plus equal-size clusters ``V_1..V_k``.

    Clusters are indexed from 0 in code; ``clusters[i]`` is the cluster the
    reduced multigraph calls ``i``.
    """

    exceptional: frozenset[int]
    clusters: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "exceptional", frozenset(self.exceptional))
        object.__setattr__(self, "clusters", tuple(frozenset(c) for c in self.clusters))
        sizes = {len(c) for c in self.clusters}
        if len(sizes) > 1:
            raise InputError(f"clusters must have equal size, got sizes {sorted(sizes)}")

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def m(self) -> int:
        return len(self.clusters[0]) if self.clusters else 0

    def cluster_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.clusters) for v in c}

    def check(self, g: Graph) -> None:
        seen: set[int] = set(check_vertex_set(g, self.exceptional))
        for i, c in enumerate(self.clusters):
            check_vertex_set(g, c)
            if seen & c:
                raise InputError(f"cluster {i} overlaps earlier parts in {sorted(seen & c)}")
            seen |= c
        if len(seen) != g.n:
            missing = sorted(set(range(g.n)) - seen)
            raise InputError(f"partition does not cover vertices {missing[:10]}")


@dataclass(frozen=True)
class ReducedMultigraph:
    k: int
    mult: tuple[tuple[int, ...], ...]
    source: tuple[Partition, Graph] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        mult = tuple(tuple(int(x) for x in row) for row in self.mult)
        object.__setattr__(self, "mult", mult)
        if len(mult) != self.k or any(len(row) != self.k for row in mult):
            raise InputError(f"multiplicity matrix must be {self.k}x{self.k}")
        for i in range(self.k):
            if mult[i][i]:
                raise InputError(f"multiplicity matrix has a loop at cluster {i}")
            for j in range(self.k):
                if mult[i][j] not in (0, 1, 2):
                    raise InputError(f"multiplicity {mult[i][j]} at ({i}, {j}) is not 0, 1 or 2")
                if mult[i][j] != mult[j][i]:
                    raise InputError(f"multiplicity matrix not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, k: int, edges: dict[tuple[int, int], int]) -> "ReducedMultigraph":
        rows = [[0] * k for _ in range(k)]
        for (i, j), m in edges.items():
            if not (0 <= i < k and 0 <= j < k):
                raise InputError(f"edge ({i}, {j}) outside [0, {k})")
            rows[i][j] = rows[j][i] = m
        return cls(k, tuple(tuple(row) for row in rows))

    def degree(self, i: int) -> int:
        """Degree of cluster ``i`` counting multiplicity."""
        return sum(self.mult[i])

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.k) if self.mult[i][j]]

    def double_neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.k) if self.mult[i][j] == 2]

    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, j, self.mult[i][j]) for i in range(self.k) for j in range(i + 1, self.k) if self.mult[i][j]]


def multiplicity_for(density: Fraction, beta: Fraction) -> int:
    if density >= Fraction(1, 2) + beta:
        return 2
    if density >= beta:
        return 1
    return 0


def build_reduced(g: Graph, p: Partition, rp: RegularityParams) -> ReducedMultigraph:
    p.check(g)
    k = p.k
    rows = [[0] * k for _ in range(k)]
    for i, j in combinations(range(k), 2):
        rows[i][j] = rows[j][i] = multiplicity_for(pair_density(g, p.clusters[i], p.clusters[j]), rp.beta)
    R = ReducedMultigraph(k, tuple(tuple(row) for row in rows), source=(p, g))
    logger.info(f"Reduced multigraph on {k} clusters of size {p.m}: {len(R.edges())} edges, min degree {reduced_min_degree(R)}")
    return R


def reduced_min_degree(R: ReducedMultigraph) -> int:
    return min((R.degree(i) for i in range(R.k)), default=0)


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    exact: bool
    density: Fraction
    witness: tuple[frozenset[int], frozenset[int]] | None = None
    witness_density: Fraction | None = None
    checked: int = 0


def _exhaustive_regular(g: Graph, xs: list[int], ys: list[int], eps: Fraction, base: Fraction) -> RegularityVerdict:
    min_x = max(1, ceil(eps * len(xs)))
    min_y = max(1, ceil(eps * len(ys)))
    checked = 0
    for size in range(min_x, len(xs) + 1):
        for sub in combinations(xs, size):
            x_mask = mask_of(sub)
            degrees = sorted(((g.adj[y] & x_mask).bit_count(), y) for y in ys)
            low = high = 0
            for t in range(1, len(ys) + 1):
                low += degrees[t - 1][0]
                high += degrees[-t][0]
                if t < min_y:
                    continue
                checked += 2
                for total, chosen in ((low, degrees[:t]), (high, degrees[-t:])):
                    d = Fraction(total, size * t)
                    if abs(d - base) > eps:
                        witness = (frozenset(sub), frozenset(y for _, y in chosen))
                        return RegularityVerdict(False, True, base, witness, d, checked)
    return RegularityVerdict(True, True, base, checked=checked)


def _sampled_regular(
    g: Graph, xs: list[int], ys: list[int], eps: Fraction, base: Fraction, trials: int, seed: int
) -> RegularityVerdict:
    rng = random.Random(seed)
    min_x = max(1, ceil(eps * len(xs)))
    min_y = max(1, ceil(eps * len(ys)))
    for trial in range(1, trials + 1):
        sub_x = rng.sample(xs, rng.randint(min_x, len(xs)))
        sub_y = rng.sample(ys, rng.randint(min_y, len(ys)))
        d = Fraction(cross_edge_count(g, sub_x, sub_y), len(sub_x) * len(sub_y))
        if abs(d - base) > eps:
            return RegularityVerdict(False, True, base, (frozenset(sub_x), frozenset(sub_y)), d, trial)
    return RegularityVerdict(True, False, base, checked=trials)


def check_regular_pair(
    g: Graph,
    x: Iterable[int],
    y: Iterable[int],
    eps,
    mode: str = "exhaustive",
    trials: int = 1000,
    seed: int = 0,
    max_side: int = MAX_EXHAUSTIVE_SIDE,
) -> RegularityVerdict:
    """Is ``(x, y)`` ε-regular?

    ``exhaustive`` is exact and returns a witness pair on failure; a
    ``sampled`` pass only ever proves irregularity.
    """
    eps = parse_rational(eps)
    if mode not in REGULARITY_MODES:
        raise InputError(f"unknown regularity mode {mode!r}; use one of {REGULARITY_MODES}")
    base = pair_density(g, x, y)
    xs, ys = sorted(x), sorted(y)
    if mode == "sampled":
        return _sampled_regular(g, xs, ys, eps, base, trials, seed)
    if max(len(xs), len(ys)) > max_side:
        raise ResourceGuardError("max_side", max_side, f"exhaustive regularity check on {len(xs)}x{len(ys)} pair")
    if len(xs) > len(ys):
        verdict = _exhaustive_regular(g, ys, xs, eps, base)
        if verdict.witness is not None:
            wy, wx = verdict.witness
            verdict = RegularityVerdict(False, True, base, (wx, wy), verdict.witness_density, verdict.checked)
        return verdict
    return _exhaustive_regular(g, xs, ys, eps, base)


def slicing_epsilon(eps, alpha) -> Fraction:
    """Regularity of a sub-pair taking at least an ``alpha`` share of each side."""
    eps, alpha = parse_rational(eps), parse_rational(alpha)
    if not 0 < alpha <= 1:
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    return max(eps / alpha, 2 * eps)


@dataclass(frozen=True)
class SlicingVerdict:
    parent_regular: bool
    sub_regular: bool
    density_gap: Fraction
    eps: Fraction
    eps_sub: Fraction

    @property
    def holds(self) -> bool:
        return not self.parent_regular or (self.sub_regular and self.density_gap < self.eps)


def check_slicing(g: Graph, x, y, eps, alpha, x_sub, y_sub) -> SlicingVerdict:
    """Exhaustively test the slicing fact on one pair and one sub-pair."""
    eps, alpha = parse_rational(eps), parse_rational(alpha)
    xs, ys, x2, y2 = (frozenset(s) for s in (x, y, x_sub, y_sub))
    if not (x2 <= xs and y2 <= ys):
        raise InputError("sub-pair must lie inside the pair")
    if alpha <= eps:
        raise InputError(f"alpha must exceed eps, got alpha={alpha}, eps={eps}")
    if len(x2) < alpha * len(xs) or len(y2) < alpha * len(ys):
        raise InputError(f"sub-pair must keep at least a {alpha} share of each side")
    eps_sub = slicing_epsilon(eps, alpha)
    parent = check_regular_pair(g, xs, ys, eps)
    sub = check_regular_pair(g, x2, y2, eps_sub)
    gap = abs(pair_density(g, x2, y2) - parent.density)
    return SlicingVerdict(parent.regular, sub.regular, gap, eps, eps_sub)


def random_equipartition(n: int, k: int, seed: int) -> Partition:
    """``k`` clusters of size ``n // k``; the remainder goes to ``V_0``."""
    if not 1 <= k <= n:
        raise InputError(f"need 1 <= k <= n, got k={k}, n={n}")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    m = n // k
    clusters = tuple(frozenset(order[i * m : (i + 1) * m]) for i in range(k))
    return Partition(frozenset(order[k * m :]), clusters)


def refine_partition(p: Partition, parts: int) -> Partition:
    """Split every cluster into ``parts`` equal pieces; leftovers join ``V_0``."""
    if parts < 1:
        raise InputError(f"parts must be at least 1, got {parts}")
    if p.m < parts:
        raise InputError(f"cannot split clusters of size {p.m} into {parts} parts")
    size = p.m // parts
    exceptional = set(p.exceptional)
    clusters = []
    for c in p.clusters:
        members = sorted(c)
        clusters.extend(frozenset(members[i * size : (i + 1) * size]) for i in range(parts))
        exceptional.update(members[parts * size :])
    return Partition(frozenset(exceptional), tuple(clusters))


def format_partition(p: Partition) -> str:
    lines = [f"# partition k={p.k} m={p.m}", "0: " + " ".join(map(str, sorted(p.exceptional)))]
    lines.extend(f"{i + 1}: " + " ".join(map(str, sorted(c))) for i, c in enumerate(p.clusters))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_partition(lines: list[str]) -> Partition:
    parts: dict[int, frozenset[int]] = {}
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise GraphParseError(f"expected '<index>: <vertices>', got {line!r}", line_number)
        try:
            index = int(head)
            members = [int(t) for t in rest.split()]
        except ValueError:
            raise GraphParseError(f"malformed partition line {line!r}", line_number) from None
        if index in parts:
            raise GraphParseError(f"part {index} listed twice", line_number)
        parts[index] = frozenset(members)
    if sorted(parts) != list(range(len(parts))):
        raise GraphParseError(f"parts must be numbered 0..{len(parts) - 1}, got {sorted(parts)}")
    if not parts:
        raise GraphParseError("empty partition file")
    return Partition(parts[0], tuple(parts[i] for i in range(1, len(parts))))


def write_partition(p: Partition, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_partition(p), encoding="utf-8")


def read_partition(path: str | Path) -> Partition:
    return parse_partition(Path(path).read_text(encoding="utf-8").splitlines())


def format_reduced(R: ReducedMultigraph) -> str:
    """Header ``# reduced k=<k>`` then ``i j multiplicity`` for every edge."""
    lines = [f"# reduced k={R.k}"]
    lines.extend(f"{i} {j} {m}" for i, j, m in R.edges())
    return "\n".join(lines) + "\n"


def format_multiplicity_csv(R: ReducedMultigraph) -> str:
    lines = ["cluster," + ",".join(map(str, range(R.k)))]
    lines.extend(f"{i}," + ",".join(map(str, row)) for i, row in enumerate(R.mult))
    return "\n".join(lines) + "\n"


def parse_reduced(lines: list[str]) -> ReducedMultigraph:
    k = None
    edges: dict[tuple[int, int], int] = {}
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line.lstrip("#").split():
                if token.startswith("k="):
                    try:
                        k = int(token[2:])
                    except ValueError:
                        raise GraphParseError(f"malformed cluster count {token!r}", line_number) from None
            continue
        try:
            i, j, m = (int(t) for t in line.split())
        except ValueError:
            raise GraphParseError(f"expected 'i j multiplicity', got {line!r}", line_number) from None
        edges[(i, j)] = m
    if k is None:
        raise GraphParseError("missing '# reduced k=<k>' header")
    return ReducedMultigraph.from_edges(k, edges)


def write_reduced(R: ReducedMultigraph, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_reduced(R), encoding="utf-8")


def read_reduced(path: str | Path) -> ReducedMultigraph:
    return parse_reduced(Path(path).read_text(encoding="utf-8").splitlines())
