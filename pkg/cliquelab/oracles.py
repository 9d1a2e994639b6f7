"""Exact exponential-time solvers used as ground truth.

Everything here is deterministic: cliques are generated in lexicographic
order and every branch-and-bound explores vertices smallest-first, so two
runs on the same graph return the same witness.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from dtos.params import ThresholdParams

from .errors import InputError, InvariantViolation, ResourceGuardError
from .graph import Graph, first_clique, has_clique, iter_bits, iter_cliques, mask_of, min_degree
from .simplex import maximize
from .tilings import FractionalTiling, Tiling, check_fractional
from .utils import DEFAULT_MAX_CLIQUES, DEFAULT_MAX_NODES, NodeBudget

logger = logging.getLogger(__name__)


def _check_r(r: int) -> None:
    if r < 2:
        raise InputError(f"clique size r must be at least 2, got {r}")


def _color_order(adj: tuple[int, ...], pool: int) -> list[tuple[int, int]]:
    """Greedy colouring of ``pool``; returns ``(vertex, colour)`` by increasing colour."""
    order = []
    color = 0
    uncolored = pool
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~adj[v]
            q ^= low
            uncolored ^= low
            order.append((v, color))
    return order


def max_clique_mask(g: Graph, within: int | None = None, max_nodes: int = DEFAULT_MAX_NODES) -> int:
    """Bitmask of a maximum clique inside ``within``.

    Branch-and-bound where the colour classes of the candidate set bound how
    many more vertices a clique can still take.
    """
    adj = g.adj
    budget = NodeBudget(max_nodes)
    best = [0, 0]  # mask, size

    def expand(current: int, size: int, pool: int) -> None:
        budget.tick("maximum clique search")
        for v, color in reversed(_color_order(adj, pool)):
            if size + color <= best[1]:
                return
            bit = 1 << v
            candidates = pool & adj[v]
            if candidates:
                expand(current | bit, size + 1, candidates)
            elif size + 1 > best[1]:
                best[0], best[1] = current | bit, size + 1
            pool &= ~bit

    pool = g.full_mask if within is None else within & g.full_mask
    if pool:
        expand(0, 0, pool)
    return best[0]


def max_independent_set(g: Graph, max_nodes: int = DEFAULT_MAX_NODES) -> frozenset[int]:
    return frozenset(iter_bits(max_clique_mask(g.complement(), max_nodes=max_nodes)))


def independence_number(g: Graph, max_nodes: int = DEFAULT_MAX_NODES) -> int:
    if g.n < 1:
        raise InputError("independence_number needs at least one vertex")
    return max_clique_mask(g.complement(), max_nodes=max_nodes).bit_count()


def alpha_ell(g: Graph, ell: int, max_nodes: int = DEFAULT_MAX_NODES) -> int:
    """Largest vertex set whose induced subgraph contains no ``K_ell``."""
    if ell < 2:
        raise InputError(f"ell must be at least 2, got {ell}")
    if ell == 2:
        return independence_number(g, max_nodes) if g.n else 0
    adj = g.adj
    budget = NodeBudget(max_nodes)
    best = [0]

    def cover_bound(pool: int) -> int:
        # a K_ell-free set meets each clique of a clique cover in < ell vertices
        total = 0
        while pool:
            low = pool & -pool
            v = low.bit_length() - 1
            part, size = low, 1
            q = pool & adj[v]
            while q:
                ql = q & -q
                part |= ql
                size += 1
                q &= adj[ql.bit_length() - 1]
            pool &= ~part
            total += min(size, ell - 1)
        return total

    def search(chosen: int, size: int, pool: int) -> None:
        budget.tick("alpha_ell search")
        if size > best[0]:
            best[0] = size
        if not pool or size + cover_bound(pool) <= best[0]:
            return
        low = pool & -pool
        v = low.bit_length() - 1
        rest = pool ^ low
        if not has_clique(g, ell - 1, chosen & adj[v]):
            search(chosen | low, size + 1, rest)
        search(chosen, size, rest)

    search(0, 0, g.full_mask)
    return best[0]


def enumerate_kr(g: Graph, r: int, max_cliques: int = DEFAULT_MAX_CLIQUES) -> list[tuple[int, ...]]:
    """All ``r``-cliques, sorted internally and listed lexicographically."""
    _check_r(r)
    cliques = []
    for clique in iter_cliques(g, r):
        cliques.append(clique)
        if len(cliques) > max_cliques:
            raise ResourceGuardError("max_cliques", max_cliques, f"enumerating K_{r} in {g!r}")
    return cliques


def max_kr_tiling(g: Graph, r: int, max_nodes: int = DEFAULT_MAX_NODES) -> Tiling:
    """A maximum ``K_r``-tiling.

    Branches on the smallest available vertex: either it joins one of its
    ``K_r``'s (tried in lexicographic order) or it stays uncovered.
    """
    _check_r(r)
    adj = g.adj
    budget = NodeBudget(max_nodes)
    ceiling = g.n // r
    best: list[tuple[int, ...]] = []
    chosen: list[tuple[int, ...]] = []

    def search(avail: int) -> bool:
        nonlocal best
        budget.tick(f"max K_{r}-tiling")
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) == ceiling:
                return True
        if not avail or len(chosen) + avail.bit_count() // r <= len(best):
            return False
        low = avail & -avail
        v = low.bit_length() - 1
        rest = avail ^ low
        for tail in iter_cliques(g, r - 1, rest & adj[v]):
            chosen.append((v, *tail))
            done = search(rest & ~mask_of(tail))
            chosen.pop()
            if done:
                return True
        return search(rest)

    search(g.full_mask)
    tiling = Tiling(r, tuple(best))
    logger.debug(f"max_kr_tiling(r={r}) on {g!r}: {len(tiling)} cliques after {budget.used} nodes")
    return tiling


def find_kr_factor(g: Graph, r: int, max_nodes: int = DEFAULT_MAX_NODES) -> Tiling | None:
    """A spanning ``K_r``-tiling, or None when none exists."""
    _check_r(r)
    if g.n % r:
        logger.info(f"No K_{r}-factor possible: {r} does not divide n={g.n}")
        return None
    adj = g.adj
    budget = NodeBudget(max_nodes)
    chosen: list[tuple[int, ...]] = []

    def search(avail: int) -> bool:
        budget.tick(f"K_{r}-factor search")
        if not avail:
            return True
        pick, pick_degree = -1, g.n + 1
        for v in iter_bits(avail):
            d = (adj[v] & avail).bit_count()
            if d < r - 1:
                return False
            if d < pick_degree:
                pick, pick_degree = v, d
        rest = avail & ~(1 << pick)
        for tail in iter_cliques(g, r - 1, rest & adj[pick]):
            chosen.append((pick, *tail))
            if search(rest & ~mask_of(tail)):
                return True
            chosen.pop()
        return False

    if not search(g.full_mask):
        return None
    factor = Tiling(r, tuple(sorted(chosen)))
    if not factor.is_spanning(g):
        raise InvariantViolation(f"factor search returned a non-spanning tiling: {factor.problems(g, pure=True)}")
    return factor


def has_kr_factor(g: Graph, r: int, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    return find_kr_factor(g, r, max_nodes) is not None


def max_fractional_tiling(
    g: Graph,
    r: int,
    max_cliques: int = DEFAULT_MAX_CLIQUES,
    max_pivots: int = 1_000_000,
) -> FractionalTiling:
    """Optimal fractional ``K_r``-tiling from the packing LP.

    maximize ``r · Σ_K w(K)`` subject to ``Σ_{K ∋ v} w(K) <= 1`` and
    ``w >= 0``; one row per vertex that lies in some ``K_r``.
    """
    cliques = enumerate_kr(g, r, max_cliques)
    if not cliques:
        return FractionalTiling(r, (), (), optimum=Fraction(0))
    vertices = sorted({v for c in cliques for v in c})
    row_of = {v: i for i, v in enumerate(vertices)}
    rows = [[0] * len(cliques) for _ in vertices]
    for j, clique in enumerate(cliques):
        for v in clique:
            rows[row_of[v]][j] = 1
    result = maximize([r] * len(cliques), rows, [1] * len(vertices), max_pivots=max_pivots)
    weights = {c: w for c, w in zip(cliques, result.x) if w}
    ft = FractionalTiling.from_weights(r, weights)
    ft = FractionalTiling(r, ft.support, ft.weights, optimum=result.value)
    check_fractional(g, ft)
    if ft.total_weight != result.value:
        raise InvariantViolation(f"LP optimum {result.value} differs from tiling weight {ft.total_weight}")
    logger.debug(f"Fractional K_{r}-tiling of {g!r}: weight {result.value} in {result.pivots} pivots")
    return ft


@dataclass(frozen=True)
class ThresholdVerdict:
    n: int
    min_degree: int
    degree_bound: Fraction
    alpha: int
    alpha_bound: Fraction
    divisible: bool

    @property
    def degree_ok(self) -> bool:
        return self.min_degree >= self.degree_bound

    @property
    def alpha_ok(self) -> bool:
        return self.alpha < self.alpha_bound

    @property
    def holds(self) -> bool:
        return self.degree_ok and self.alpha_ok and self.divisible

    def clauses(self) -> dict[str, bool]:
        return {"min_degree": self.degree_ok, "independence": self.alpha_ok, "divisibility": self.divisible}


def satisfies_threshold(g: Graph, params: ThresholdParams, max_nodes: int = DEFAULT_MAX_NODES) -> ThresholdVerdict:
    """Check δ(G) ≥ (1 − 2/r + μ)n, α(G) < γn and r | n."""
    r = params.r
    verdict = ThresholdVerdict(
        n=g.n,
        min_degree=min_degree(g),
        degree_bound=(1 - Fraction(2, r) + params.mu) * g.n,
        alpha=independence_number(g, max_nodes),
        alpha_bound=params.gamma * g.n,
        divisible=g.n % r == 0,
    )
    logger.debug(f"Threshold check for {g!r}: {verdict.clauses()}")
    return verdict


def erdos_sos_clique(g: Graph, r: int, vertices: Iterable[int] | None = None) -> frozenset[int] | None:
    """First ``K_r`` inside ``vertices`` (all of ``g`` when omitted)."""
    _check_r(r)
    within = None if vertices is None else mask_of(vertices)
    clique = first_clique(g, r, within)
    return None if clique is None else frozenset(clique)
