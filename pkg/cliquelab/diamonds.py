"""Diamond paths: spine vertices linked by disjoint cliques.

Consecutive spine vertices ``v_i, v_{i+1}`` share a gem, a clique of size
``r - 1`` inside their joint neighbourhood. The gems give two tilings of
the path, one using each spine vertex with the gem after it, one with the
gem before it; absorbers switch between them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, InvariantViolation
from .graph import Graph, bfs_distances, iter_bits, iter_cliques, mask_of
from .utils import NodeBudget

logger = logging.getLogger(__name__)

DEFAULT_MAX_LEN = 7
DEFAULT_SEARCH_NODES = 200_000


@dataclass(frozen=True)
class DiamondPath:
    spine: tuple[int, ...]
    gems: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.spine)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.spine).union(*map(frozenset, self.gems))

    def forward_cliques(self) -> list[tuple[int, ...]]:
        """Cliques ``{v_i} ∪ C_i``; they cover everything but the last spine vertex."""
        return [tuple(sorted((v, *gem))) for v, gem in zip(self.spine, self.gems)]

    def backward_cliques(self) -> list[tuple[int, ...]]:
        """Cliques ``C_i ∪ {v_{i+1}}``; they cover everything but the first spine vertex."""
        return [tuple(sorted((*gem, v))) for gem, v in zip(self.gems, self.spine[1:])]


def diamond_path_problems(g: Graph, path: DiamondPath, gem_size: int) -> list[str]:
    found = []
    if len(path.gems) != len(path.spine) - 1:
        found.append(f"{len(path.spine)} spine vertices need {len(path.spine) - 1} gems, got {len(path.gems)}")
    members = list(path.spine) + [v for gem in path.gems for v in gem]
    if len(set(members)) != len(members):
        found.append("spine and gems are not pairwise disjoint")
    if any(not 0 <= v < g.n for v in members):
        return found + ["vertex outside the graph"]
    for i, gem in enumerate(path.gems):
        if len(gem) != gem_size:
            found.append(f"gem {i} has size {len(gem)}, expected {gem_size}")
        if not g.is_clique(gem):
            found.append(f"gem {i} is not a clique")
        if i + 1 < len(path.spine):
            joint = g.adj[path.spine[i]] & g.adj[path.spine[i + 1]]
            if mask_of(gem) & ~joint:
                found.append(f"gem {i} is not inside the joint neighbourhood of {path.spine[i]} and {path.spine[i + 1]}")
    return found


def check_diamond_path(g: Graph, path: DiamondPath, gem_size: int) -> None:
    problems = diamond_path_problems(g, path, gem_size)
    if problems:
        raise InvariantViolation(f"invalid diamond path: {problems[0]}")


def find_diamond_path(
    g: Graph,
    s: int,
    t: int,
    r: int,
    max_len: int = DEFAULT_MAX_LEN,
    excluded: Iterable[int] = (),
    gem_size: int | None = None,
    max_nodes: int = DEFAULT_SEARCH_NODES,
) -> DiamondPath | None:
    """Shortest diamond path from ``s`` to ``t`` avoiding ``excluded``.

    Iterative deepening on the spine length; within one depth the search is
    lexicographic with backtracking over gem choices.
    """
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        raise InputError("diamond path endpoints must differ")
    if max_len < 2:
        raise InputError(f"max_len must be at least 2, got {max_len}")
    gem_size = r - 1 if gem_size is None else gem_size
    if gem_size < 1:
        raise InputError(f"gem size must be positive, got {gem_size}")
    blocked = mask_of(excluded)
    if blocked >> s & 1 or blocked >> t & 1:
        raise InputError("diamond path endpoints must not be excluded")

    adj = g.adj
    free = g.full_mask & ~blocked
    dist_to_t = bfs_distances(g, t, within=free)
    if s not in dist_to_t:
        return None
    budget = NodeBudget(max_nodes, guard="diamond_search_nodes")
    spine = [s]
    gems: list[tuple[int, ...]] = []

    def steps_needed(w: int) -> int:
        # one spine step moves at most two hops
        d = dist_to_t.get(w)
        return -1 if d is None else (d + 1) // 2

    def extend(avail: int, limit: int) -> bool:
        budget.tick(f"diamond path {s} -> {t}")
        u = spine[-1]
        left = limit - len(spine)
        reach = 0
        for x in iter_bits(adj[u] & avail):
            reach |= adj[x]
        if left == 1:
            candidates = reach & (1 << t)
        else:
            candidates = reach & avail
        for w in iter_bits(candidates):
            if w != t:
                need = steps_needed(w)
                if need < 0 or need > left - 1:
                    continue
            for gem in iter_cliques(g, gem_size, adj[u] & adj[w] & avail & ~(1 << w)):
                spine.append(w)
                gems.append(gem)
                if w == t or extend(avail & ~mask_of(gem) & ~(1 << w), limit):
                    return True
                spine.pop()
                gems.pop()
        return False

    for limit in range(2, max_len + 1):
        if steps_needed(s) > limit - 1:
            continue
        if extend(free & ~(1 << s) & ~(1 << t), limit):
            path = DiamondPath(tuple(spine), tuple(gems))
            check_diamond_path(g, path, gem_size)
            logger.debug(f"Diamond path {s} -> {t} of length {path.length} after {budget.used} nodes")
            return path
    return None
