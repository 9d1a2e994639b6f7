"""Constructive tiling pipeline.

Starting from a greedy ``K_r``-tiling, ``augment_step`` grows coverage one
vertex at a time by turning a ``K_r`` into a ``K_{r+1}``. Blowing the graph
up by ``r`` turns every ``K_{r+1}`` back into ``K_r``'s, so alternating the
two moves and reading the final tiling back through the cluster maps gives
a fractional ``K_r``-tiling of the original graph.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import floor
from typing import Sequence

from dtos.params import AugmentParams, RegularityParams, parse_rational

from .constructions import GeneratedGraph, blow_up
from .embeddings import FractionalMultiTiling, MultiEmbedding, greedy_embed, validate_multi_embedding
from .errors import InputError, InvariantViolation
from .graph import Graph, first_clique, iter_bits, mask_of
from .reduced import Partition, ReducedMultigraph
from .tilings import FractionalTiling, Tiling, check_fractional, ensure_valid

logger = logging.getLogger(__name__)


def greedy_tiling(g: Graph, r: int) -> Tiling:
    """Take the lexicographically first ``K_r`` among uncovered vertices until none is left."""
    return extend_greedily(g, Tiling(r))


def extend_greedily(g: Graph, t: Tiling) -> Tiling:
    avail = g.full_mask & ~t.covered_mask
    cliques = list(t.cliques)
    while True:
        clique = first_clique(g, t.r, avail)
        if clique is None:
            break
        cliques.append(clique)
        avail &= ~mask_of(clique)
    return Tiling(t.r, tuple(cliques))


@dataclass(frozen=True)
class AugmentTrace:
    kind: str  # "extend" or "swap"
    chosen_clique: tuple[int, ...]
    new_clique: tuple[int, ...]
    missing_index: int | None = None
    removed_vertex: int | None = None
    swap_edge: tuple[int, int] | None = None
    added_vertex: int | None = None
    pool_sizes: dict[str, int] = field(default_factory=dict)
    widened: bool = False


def check_trace(g: Graph, trace: AugmentTrace) -> None:
    """The recorded move must produce a clique one vertex larger."""
    if not g.is_clique(trace.new_clique) or len(trace.new_clique) != len(trace.chosen_clique) + 1:
        raise InvariantViolation(f"augment move did not produce a K_{len(trace.chosen_clique) + 1}: {trace}")
    if trace.kind == "swap":
        a, b = trace.swap_edge
        kept = [v for v in trace.chosen_clique if v != trace.removed_vertex]
        if trace.chosen_clique[trace.missing_index] != trace.removed_vertex:
            raise InvariantViolation("removed vertex is not the clique's missing index")
        if not g.has_edge(a, b) or not all(g.has_edge(a, v) and g.has_edge(b, v) for v in kept):
            raise InvariantViolation(f"swap edge {trace.swap_edge} does not extend {kept}")


def _replace(t: Tiling, old: tuple[int, ...], new: tuple[int, ...]) -> Tiling:
    cliques = list(t.cliques)
    cliques[cliques.index(old)] = tuple(sorted(new))
    return Tiling(t.r, tuple(cliques))


def _swap_move(g: Graph, t: Tiling, pool: int, pool_sizes: dict[str, int], widened: bool) -> tuple[Tiling, AugmentTrace] | None:
    r = t.r
    incidence = []
    for clique in t.parts_of_size(r):
        k_mask = mask_of(clique)
        hits = [v for v in iter_bits(pool) if (g.adj[v] & k_mask).bit_count() == r - 1]
        if hits:
            incidence.append((-len(hits), clique, hits))
    incidence.sort()
    for _, clique, hits in incidence:
        classes: dict[int, list[int]] = defaultdict(list)
        for v in hits:
            j = next(j for j, w in enumerate(clique) if not g.has_edge(v, w))
            classes[j].append(v)
        for j in sorted(classes, key=lambda j: (-len(classes[j]), j)):
            members = classes[j]
            edge = next(((a, b) for a, b in combinations(members, 2) if g.has_edge(a, b)), None)
            if edge is None:
                continue
            w = clique[j]
            new = tuple(sorted([v for v in clique if v != w] + list(edge)))
            sizes = dict(pool_sizes, R3=len(hits), R3j=len(members))
            trace = AugmentTrace("swap", clique, new, j, w, edge, pool_sizes=sizes, widened=widened)
            return _replace(t, clique, new), trace
    return None


def augment_step(g: Graph, t: Tiling, p: AugmentParams) -> tuple[Tiling, AugmentTrace] | None:
    """Cover one more vertex by turning a ``K_r`` of ``t`` into a ``K_{r+1}``.

    A direct extension by an uncovered vertex adjacent to a whole ``K_r`` is
    tried first. Otherwise the uncovered vertices whose degree into the
    covered set exceeds ``(1 - 2/r + μ)|T|`` are matched against the
    ``K_r``'s they see ``r - 1`` vertices of, and an edge among vertices
    missing the same clique vertex replaces that vertex. Returns None when no
    move exists.
    """
    r = t.r
    if r != p.r:
        raise InputError(f"tiling has r={r} but parameters have r={p.r}")
    ensure_valid(g, t)
    covered = t.covered_mask
    uncovered = g.full_mask & ~covered
    for clique in t.parts_of_size(r):
        common = g.common_neighbors_mask(clique) & uncovered
        if common:
            u = (common & -common).bit_length() - 1
            new = tuple(sorted((*clique, u)))
            trace = AugmentTrace("extend", clique, new, added_vertex=u, pool_sizes={"R": uncovered.bit_count()})
            return _replace(t, clique, new), trace

    threshold = (1 - Fraction(2, r) + p.mu) * t.covered_count
    filtered = mask_of(v for v in iter_bits(uncovered) if (g.adj[v] & covered).bit_count() > threshold)
    sizes = {"R": uncovered.bit_count(), "R1": filtered.bit_count(), "R2": filtered.bit_count()}
    move = _swap_move(g, t, filtered, sizes, widened=False)
    if move is None and p.widen_pool and filtered != uncovered:
        sizes = dict(sizes, R2=uncovered.bit_count())
        move = _swap_move(g, t, uncovered, sizes, widened=True)
        if move is not None:
            logger.debug("Degree-filtered pool was stuck; the swap came from the widened pool")
    return move


@dataclass(frozen=True)
class AugmentRun:
    tiling: Tiling
    traces: tuple[AugmentTrace, ...]
    coverage: tuple[int, ...]


def augment_with_history(g: Graph, r: int, p: AugmentParams, target_cover=Fraction(1), start: Tiling | None = None) -> AugmentRun:
    target_cover = parse_rational(target_cover)
    t = extend_greedily(g, start) if start is not None else greedy_tiling(g, r)
    traces = []
    coverage = [t.covered_count]
    while t.covered_count < target_cover * g.n:
        step = augment_step(g, t, p)
        if step is None:
            break
        t, trace = step
        check_trace(g, trace)
        t = extend_greedily(g, t)
        ensure_valid(g, t)
        if t.covered_count <= coverage[-1]:
            raise InvariantViolation(f"augment step did not increase coverage ({coverage[-1]} -> {t.covered_count})")
        traces.append(trace)
        coverage.append(t.covered_count)
    logger.debug(f"Augmentation on {g!r}: coverage {coverage[0]} -> {coverage[-1]} in {len(traces)} steps")
    return AugmentRun(t, tuple(traces), tuple(coverage))


def augment_to_target(g: Graph, r: int, p: AugmentParams, target_cover=Fraction(1), start: Tiling | None = None) -> Tiling:
    return augment_with_history(g, r, p, target_cover, start).tiling


def flatten_in_blowup(g: Graph, t: Tiling, r: int) -> tuple[GeneratedGraph, Tiling]:
    """Blow ``g`` up by ``r`` and tile the copies of ``t`` with ``K_r``'s only.

    Copy ``c`` of a ``K_r`` part gives one transversal ``K_r``. For a
    ``K_{r+1}`` part the ``c``-th clique leaves out ``v_c`` and takes copy
    ``c`` of ``v_j`` when ``c < j`` and copy ``c - 1`` otherwise, which uses
    every copy of every vertex exactly once.
    """
    if t.r != r:
        raise InputError(f"tiling has r={t.r}, expected {r}")
    ensure_valid(g, t)
    blown = blow_up(g, r)
    cliques = []
    for part in t.cliques:
        if len(part) == r:
            cliques.extend(tuple(v * r + c for v in part) for c in range(r))
        else:
            for c in range(r + 1):
                cliques.append(tuple(v * r + (c if c < j else c - 1) for j, v in enumerate(part) if j != c))
    flat = Tiling(r, tuple(cliques))
    if flat.covered_count != r * t.covered_count or not flat.is_valid(blown.graph, pure=True):
        raise InvariantViolation(f"blow-up tiling is broken: {flat.problems(blown.graph, pure=True)[:1]}")
    return blown, flat


def tiling_to_fractional(base: Graph, blown_tiling: Tiling, s: int, cluster_of: Sequence[int]) -> FractionalTiling:
    """Read a tiling of an ``s``-fold blow-up back as a fractional tiling of ``base``.

    Each ``K_r`` counts ``1/s`` on its image; a ``K_{r+1}`` spreads the same
    load over its ``r + 1`` sub-cliques.
    """
    r = blown_tiling.r
    weights: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for part in blown_tiling.cliques:
        image = tuple(sorted(cluster_of[x] for x in part))
        if len(set(image)) != len(part):
            raise InvariantViolation(f"clique {part} is not transversal to the blow-up fibers")
        if len(part) == r:
            weights[image] += Fraction(1, s)
        else:
            for sub in combinations(image, r):
                weights[sub] += Fraction(1, r * s)
    ft = FractionalTiling.from_weights(r, weights)
    check_fractional(base, ft)
    if ft.total_weight != Fraction(blown_tiling.covered_count, s):
        raise InvariantViolation(f"fractional weight {ft.total_weight} != covered/s = {Fraction(blown_tiling.covered_count, s)}")
    return ft


@dataclass(frozen=True)
class FracmatResult:
    tiling: FractionalTiling
    rounds: int
    truncated: bool
    history: tuple[Fraction, ...]

    @property
    def weight(self) -> Fraction:
        return self.tiling.total_weight


def fracmat_iterate(g: Graph, r: int, p: AugmentParams) -> FracmatResult:
    """Alternate enlargement and blow-up, then read the tiling back on ``g``.

    Stops when the tiling is perfect, after a round without gain, after
    ``p.max_rounds`` blow-ups, or when the next blow-up would exceed
    ``p.max_vertices`` (then ``truncated`` is set).
    """
    current = g
    cluster_of: list[int] = list(range(g.n))
    scale = 1
    start = None
    history: list[Fraction] = []
    rounds = 0
    truncated = False
    while True:
        t = augment_to_target(current, r, p, Fraction(1), start)
        fraction = Fraction(t.covered_count, current.n) if current.n else Fraction(1)
        if history and fraction < history[-1]:
            raise InvariantViolation(f"coverage fell from {history[-1]} to {fraction}")
        gained = not history or fraction > history[-1]
        history.append(fraction)
        logger.debug(f"Blow-up round {rounds}: {current.n} vertices, covered fraction {fraction}")
        if fraction == 1 or not gained or rounds >= p.max_rounds:
            break
        if current.n * r > p.max_vertices:
            truncated = True
            logger.warning(f"⚠️ Blow-up to {current.n * r} vertices exceeds the guard {p.max_vertices}; stopping")
            break
        blown, start = flatten_in_blowup(current, t, r)
        cluster_of = [cluster_of[x // r] for x in range(blown.graph.n)]
        scale *= r
        current = blown.graph
        rounds += 1
    ft = tiling_to_fractional(g, t, scale, cluster_of)
    return FracmatResult(ft, rounds, truncated, tuple(history))


def project_to_reduced(
    gamma_tiling: FractionalTiling,
    cluster_of: Sequence[int],
    y1: int,
    R: ReducedMultigraph,
    r: int,
) -> FractionalMultiTiling:
    """Each ``K_r`` of the cluster graph becomes the multi-embedding of its cluster loads, weight ``w / y1``."""
    weights: dict[tuple[tuple[int, int], ...], Fraction] = defaultdict(Fraction)
    for clique, w in zip(gamma_tiling.support, gamma_tiling.weights):
        loads: dict[int, int] = defaultdict(int)
        for x in clique:
            loads[cluster_of[x]] += 1
        weights[tuple(sorted(loads.items()))] += w / y1
    structures, values = [], []
    for key, w in sorted(weights.items()):
        me = MultiEmbedding.from_loads(dict(key))
        verdict = validate_multi_embedding(me, R)
        if not verdict.valid:
            raise InvariantViolation(f"clique with cluster loads {dict(key)} is not a multi-embedding: {verdict.violations[0][1]}")
        structures.append(me)
        values.append(w)
    tiling = FractionalMultiTiling(r, tuple(structures), tuple(values))
    problems = tiling.problems(R)
    if problems:
        raise InvariantViolation(f"projected tiling is invalid: {problems[0]}")
    return tiling


@dataclass(frozen=True)
class RealizedTiling:
    tiling: Tiling
    required: Fraction
    stuck: MultiEmbedding | None = None

    @property
    def meets_bound(self) -> bool:
        return self.tiling.covered_count >= self.required


def realize_multi_tiling(
    g: Graph,
    p: Partition,
    R: ReducedMultigraph,
    frac: FractionalMultiTiling,
    rp: RegularityParams,
    eta=Fraction(1, 10),
) -> RealizedTiling:
    """Pull a fractional multi-embedding tiling of ``R`` back to ``K_r``'s in ``g``.

    Weights are scaled by ``1 - η``; each structure is embedded
    ``⌊w · m⌋`` times into the unused part of its clusters. Coverage is
    reported against ``(1 - 2η)`` times the vertices the fractional tiling
    accounts for.
    """
    eta = parse_rational(eta)
    m = p.m
    free = {i: set(c) for i, c in enumerate(p.clusters)}
    cliques = []
    stuck = None
    for me, w in zip(frac.structures, frac.weights):
        copies = floor(w * (1 - eta) * m)
        for _ in range(copies):
            targets = {i: frozenset(free[i]) for i in me.clusters}
            result = greedy_embed(g, p, R, me, targets=targets, eps=rp.eps)
            if not result.found:
                stuck = me
                break
            images = tuple(sorted(result.mapping.values()))
            cliques.append(images)
            for a, x in result.mapping.items():
                free[me.assignment[a]].discard(x)
        if stuck is not None:
            logger.warning(f"⚠️ Greedy embedding stalled on structure {me.loads()}")
            break
    tiling = Tiling(frac.r, tuple(cliques))
    ensure_valid(g, tiling, pure=True)
    required = (1 - 2 * eta) * frac.total_weight * m
    return RealizedTiling(tiling, required, stuck)
