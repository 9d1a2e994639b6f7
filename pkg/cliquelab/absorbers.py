"""Absorbers and the absorbing pipeline.

An ``(S, t)``-absorber for an ``r``-set ``S`` is a set of ``r·t`` vertices
that has a ``K_r``-factor both on its own and together with ``S``. The
builder hangs a diamond path from every vertex of a ``K_r`` to a vertex of
``S``; the forward cliques of the paths tile the body, and the ``K_r`` plus
the backward cliques tile body and ``S`` together.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, floor
from typing import Iterable

from dtos.params import AbsorberParams, AugmentParams

from .diamonds import DiamondPath, check_diamond_path, find_diamond_path
from .errors import InputError, InvariantViolation, ResourceGuardError
from .graph import Graph, check_vertex_set, first_clique, induced_subgraph, iter_cliques, mask_of
from .oracles import find_kr_factor
from .tiling import augment_to_target, extend_greedily
from .tilings import Tiling, ensure_valid
from .utils import DEFAULT_MAX_NODES

logger = logging.getLogger(__name__)

MAX_BASE_CLIQUES = 8


@dataclass(frozen=True)
class SAbsorber:
    s_set: frozenset[int]
    body: frozenset[int]
    base_clique: tuple[int, ...] | None
    paths: tuple[DiamondPath, ...]
    padding: tuple[tuple[int, ...], ...]
    without_s: Tiling
    with_s: Tiling
    method: str  # "diamond" or "clique"

    def summary(self) -> dict:
        return {
            "s_set": sorted(self.s_set),
            "body_size": len(self.body),
            "method": self.method,
            "path_lengths": [p.length for p in self.paths],
            "padding": len(self.padding),
        }


@dataclass(frozen=True)
class AbsorbingSet:
    vertices: frozenset[int]
    absorbers: tuple[SAbsorber, ...]
    budget: int
    certified: bool | None  # None when certification was skipped
    best_effort: bool
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class PipelineResult:
    tiling: Tiling
    perfect: bool
    stage: str
    absorbing: AbsorbingSet | None
    released: int = 0
    diagnostics: tuple[str, ...] = field(default_factory=tuple)


def _factors_on(g: Graph, vertices: frozenset[int], r: int, witness: Tiling | None, max_nodes: int) -> bool:
    if witness is not None and witness.covered == vertices and witness.is_valid(g, pure=True):
        return True
    sub, _ = induced_subgraph(g, vertices)
    return find_kr_factor(sub, r, max_nodes) is not None


def is_s_t_absorber(
    g: Graph,
    s: Iterable[int],
    body: Iterable[int],
    p: AbsorberParams,
    witnesses: tuple[Tiling, Tiling] | None = None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> bool:
    """Whether ``body`` is ``(s, t)``-absorbing.

    ``witnesses`` are candidate factors of ``G[body]`` and ``G[body ∪ s]``;
    when one does not check out the exact oracle decides.
    """
    s = check_vertex_set(g, s)
    body = check_vertex_set(g, body)
    if len(s) != p.r:
        raise InputError(f"S must have exactly r={p.r} vertices, got {len(s)}")
    if s & body:
        raise InputError(f"S and the absorber body overlap in {sorted(s & body)}")
    if len(body) != p.body_size:
        return False
    without_s, with_s = witnesses if witnesses is not None else (None, None)
    return _factors_on(g, body, p.r, without_s, max_nodes) and _factors_on(g, body | s, p.r, with_s, max_nodes)


def admissible_leftover_count(n_outside: int, a_size: int, p: AbsorberParams, n: int) -> int:
    """Number of sets ``R`` with ``|R| ≤ ξn`` and ``r | |A| + |R|``."""
    bound = min(floor(p.xi * n), n_outside)
    return sum(comb(n_outside, k) for k in range(bound + 1) if (a_size + k) % p.r == 0)


def xi_absorbing_counterexample(
    g: Graph, a: Iterable[int], p: AbsorberParams, max_nodes: int = DEFAULT_MAX_NODES
) -> frozenset[int] | None:
    """First admissible leftover ``R`` that ``A`` fails to absorb, or None."""
    a = check_vertex_set(g, a)
    outside = [v for v in range(g.n) if v not in a]
    total = admissible_leftover_count(len(outside), len(a), p, g.n)
    if total > p.certify_limit:
        raise ResourceGuardError("certify_limit", p.certify_limit, f"{total} leftover sets to check")
    bound = min(floor(p.xi * g.n), len(outside))
    for k in range(bound + 1):
        if (len(a) + k) % p.r:
            continue
        for leftover in combinations(outside, k):
            sub, _ = induced_subgraph(g, a.union(leftover))
            if find_kr_factor(sub, p.r, max_nodes) is None:
                logger.debug(f"Absorbing check failed on leftover {leftover}")
                return frozenset(leftover)
    return None


def is_xi_absorbing(g: Graph, a: Iterable[int], p: AbsorberParams, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    return xi_absorbing_counterexample(g, a, p, max_nodes) is None


def _padding(g: Graph, r: int, pool: int, count: int) -> list[tuple[int, ...]] | None:
    cliques = []
    for _ in range(count):
        clique = first_clique(g, r, pool)
        if clique is None:
            return None
        cliques.append(clique)
        pool &= ~mask_of(clique)
    return cliques


def _diamond_absorber(
    g: Graph, s: frozenset[int], base: tuple[int, ...], p: AbsorberParams, blocked: int, max_nodes: int
) -> SAbsorber | None:
    r = p.r
    used = mask_of(base)
    paths = []
    for v, target in zip(base, sorted(s)):
        excluded = (blocked | used | mask_of(s)) & ~(1 << v) & ~(1 << target)
        try:
            path = find_diamond_path(
                g, v, target, r,
                max_len=p.max_path_len,
                excluded=[x for x in range(g.n) if excluded >> x & 1],
                gem_size=p.gem_size,
                max_nodes=max_nodes,
            )
        except ResourceGuardError as e:
            logger.warning(f"⚠️ Diamond path {v} -> {target} gave up: {e}")
            return None
        if path is None:
            logger.debug(f"No diamond path {v} -> {target} of length <= {p.max_path_len}")
            return None
        check_diamond_path(g, path, p.gem_size)
        used |= mask_of(path.vertices - {target})
        paths.append(path)

    body_core = used
    missing = p.body_size - body_core.bit_count()
    if missing < 0 or missing % r:
        logger.debug(f"Diamond paths use {body_core.bit_count()} vertices; cannot pad to {p.body_size}")
        return None
    padding = _padding(g, r, g.full_mask & ~(blocked | body_core | mask_of(s)), missing // r)
    if padding is None:
        logger.debug(f"Not enough disjoint K_{r}'s left to pad the absorber for S={sorted(s)}")
        return None

    body = frozenset(x for x in range(g.n) if body_core >> x & 1).union(*map(frozenset, padding))
    forward = [c for path in paths for c in path.forward_cliques()]
    backward = [c for path in paths for c in path.backward_cliques()]
    return SAbsorber(
        s_set=s,
        body=body,
        base_clique=base,
        paths=tuple(paths),
        padding=tuple(padding),
        without_s=Tiling(r, tuple(forward + padding)),
        with_s=Tiling(r, tuple([base] + backward + padding)),
        method="diamond",
    )


def _clique_absorber(g: Graph, s: frozenset[int], p: AbsorberParams, blocked: int) -> SAbsorber | None:
    padding = _padding(g, p.r, g.full_mask & ~(blocked | mask_of(s)), p.t)
    if padding is None:
        return None
    return SAbsorber(
        s_set=s,
        body=frozenset().union(*map(frozenset, padding)),
        base_clique=None,
        paths=(),
        padding=tuple(padding),
        without_s=Tiling(p.r, tuple(padding)),
        with_s=Tiling(p.r, tuple([tuple(sorted(s))] + padding)),
        method="clique",
    )


def build_s_absorber(
    g: Graph,
    s: Iterable[int],
    r: int | AbsorberParams,
    forbidden: Iterable[int] = (),
    max_nodes: int = 200_000,
) -> SAbsorber | None:
    """Diamond-path absorber for ``s`` avoiding ``forbidden``, or None.

    A few base cliques are tried in lexicographic order. When ``s`` is itself
    a clique and no diamond absorber fits, ``t`` disjoint ``K_r``'s do.
    """
    p = r if isinstance(r, AbsorberParams) else AbsorberParams(r=r)
    s = check_vertex_set(g, s)
    if len(s) != p.r:
        raise InputError(f"S must have exactly r={p.r} vertices, got {len(s)}")
    blocked = mask_of(check_vertex_set(g, forbidden))
    if blocked & mask_of(s):
        raise InputError("S must be disjoint from the forbidden set")

    absorber = None
    pool = g.full_mask & ~blocked & ~mask_of(s)
    for attempt, base in enumerate(iter_cliques(g, p.r, pool)):
        if attempt >= MAX_BASE_CLIQUES:
            break
        absorber = _diamond_absorber(g, s, base, p, blocked, max_nodes)
        if absorber is not None:
            break
    if absorber is None and g.is_clique(s):
        absorber = _clique_absorber(g, s, p, blocked)
    if absorber is None:
        logger.warning(f"⚠️ No ({sorted(s)}, {p.t})-absorber found")
        return None

    if absorber.body & (s | frozenset(x for x in range(g.n) if blocked >> x & 1)):
        raise InvariantViolation("absorber body meets S or the forbidden set")
    # gems of size r - 1 make both witness tilings pure K_r-factors
    balanced = absorber.method == "clique" or p.gem_size == p.r - 1
    if balanced:
        for tiling, cover in ((absorber.without_s, absorber.body), (absorber.with_s, absorber.body | s)):
            if tiling.covered != cover or not tiling.is_valid(g, pure=True):
                raise InvariantViolation(f"absorber witness tiling is broken: {tiling.problems(g, pure=True)[:1]}")
    if not is_s_t_absorber(g, s, absorber.body, p, (absorber.without_s, absorber.with_s)):
        if balanced:
            raise InvariantViolation("built absorber failed verification")
        logger.warning(f"⚠️ Absorber for S={sorted(s)} with gem size {p.gem_size} failed verification")
        return None
    logger.debug(f"Built {absorber.method} absorber for S={sorted(s)}: {absorber.summary()}")
    return absorber


def build_absorbing_set(
    g: Graph, p: AbsorberParams, seed: int, certify: bool = True, max_nodes: int = 200_000
) -> AbsorbingSet:
    """Union of disjoint absorbers for randomly sampled ``r``-sets, within ``φn`` vertices."""
    budget = floor(p.phi * g.n)
    rng = random.Random(seed)
    vertices: frozenset[int] = frozenset()
    absorbers = []
    notes = []
    for _ in range(p.max_attempts):
        if len(vertices) + p.body_size > budget:
            break
        outside = [v for v in range(g.n) if v not in vertices]
        if len(outside) < p.r + p.body_size:
            break
        s = frozenset(rng.sample(outside, p.r))
        absorber = build_s_absorber(g, s, p, forbidden=vertices, max_nodes=max_nodes)
        if absorber is None:
            continue
        vertices = vertices | absorber.body
        absorbers.append(absorber)

    best_effort = len(vertices) + p.body_size <= budget
    if p.body_size > budget:
        best_effort = True
        notes.append(f"budget phi*n={budget} cannot hold one body of size {p.body_size}")
        logger.warning(f"⚠️ Absorbing budget {budget} is below the body size {p.body_size}")
    elif best_effort:
        notes.append(f"stopped at {len(vertices)} of {budget} budgeted vertices")
        logger.warning(f"⚠️ Absorbing set stopped short of its budget: {len(vertices)}/{budget} vertices")

    certified = None
    if certify:
        count = admissible_leftover_count(g.n - len(vertices), len(vertices), p, g.n)
        if count <= p.certify_limit:
            certified = is_xi_absorbing(g, vertices, p)
            logger.info(f"Absorbing set of {len(vertices)} vertices checked on {count} leftover sets: {certified}")
        else:
            notes.append(f"uncertified: {count} leftover sets exceed certify_limit={p.certify_limit}")
            logger.warning(f"⚠️ Absorbing set left uncertified ({count} leftover sets)")
    return AbsorbingSet(vertices, tuple(absorbers), budget, certified, best_effort, tuple(notes))


def _drop_extra_vertices(t: Tiling) -> Tiling:
    return Tiling(t.r, tuple(c[: t.r] for c in t.cliques))


def _relabel(t: Tiling, order: list[int]) -> Tiling:
    return Tiling(t.r, tuple(tuple(order[v] for v in c) for c in t.cliques))


def full_pipeline(
    g: Graph,
    p: AbsorberParams,
    ap: AugmentParams,
    seed: int,
    certify: bool = False,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> PipelineResult:
    """Absorbing set, near-perfect tiling of the rest, exact finish on the leftover.

    If the exact finish fails, tiling cliques with the most edges into the
    leftover are released back one at a time and the finish is retried.
    """
    r = p.r
    if ap.r != r:
        raise InputError(f"absorber and augmentation parameters disagree on r ({r} vs {ap.r})")
    diagnostics = []

    def give_up(stage: str, partial: Tiling, absorbing: AbsorbingSet | None, released: int = 0) -> PipelineResult:
        best = extend_greedily(g, partial)
        ensure_valid(g, best, pure=True)
        logger.warning(f"⚠️ Pipeline stopped at stage '{stage}': {diagnostics[-1]}")
        return PipelineResult(best, False, stage, absorbing, released, tuple(diagnostics))

    if g.n % r:
        diagnostics.append(f"{r} does not divide n={g.n}")
        return give_up("divisibility", Tiling(r), None)

    absorbing = build_absorbing_set(g, p, seed, certify=certify)
    diagnostics.append(f"absorbing set: {len(absorbing.vertices)} vertices in {len(absorbing.absorbers)} absorbers")
    logger.info(f"Pipeline stage 'absorb': {diagnostics[-1]}")

    rest = [v for v in range(g.n) if v not in absorbing.vertices]
    cover = Tiling(r)
    if rest:
        h, order = induced_subgraph(g, rest)
        target = 1 - p.xi
        cover = _relabel(_drop_extra_vertices(augment_to_target(h, r, ap, target)), order)
    ensure_valid(g, cover, pure=True)
    diagnostics.append(f"cover: {cover.covered_count} of {len(rest)} remaining vertices")
    logger.info(f"Pipeline stage 'cover': {diagnostics[-1]}")

    kept = list(cover.cliques)
    released = 0
    while True:
        leftover = frozenset(range(g.n)) - frozenset(v for c in kept for v in c)
        sub, order = induced_subgraph(g, leftover)
        try:
            finish = find_kr_factor(sub, r, max_nodes)
        except ResourceGuardError as e:
            diagnostics.append(str(e))
            return give_up("finish", Tiling(r, tuple(kept)), absorbing, released)
        if finish is not None:
            break
        if not kept:
            diagnostics.append("no K_r-factor of the whole graph")
            return give_up("finish", Tiling(r), absorbing, released)
        leftover_mask = mask_of(leftover)
        kept.sort(key=lambda c: sum((g.adj[v] & leftover_mask).bit_count() for v in c))
        kept.pop()
        released += 1
        logger.debug(f"Exact finish failed on {len(leftover)} vertices; released clique {released}")

    merged = Tiling(r, tuple(sorted(kept + list(_relabel(finish, order).cliques))))
    if not merged.is_spanning(g):
        raise InvariantViolation(f"pipeline produced a non-spanning factor: {merged.problems(g, pure=True)[:1]}")
    diagnostics.append(f"finish: {len(finish)} cliques on {len(leftover)} vertices after releasing {released}")
    logger.info(f"Pipeline stage 'finish': {diagnostics[-1]}")
    return PipelineResult(merged, True, "factor", absorbing, released, tuple(diagnostics))
