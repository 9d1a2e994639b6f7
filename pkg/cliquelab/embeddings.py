"""Multi-embeddings of pattern graphs into a reduced multigraph.

A multi-embedding maps each vertex of a pattern ``H`` to a cluster so that
every cluster receives a single vertex, an edge or a path of length two,
with the multiplicity rules that let the greedy embedder pull a genuine
copy of ``H`` out of the clusters afterwards.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Mapping

from dtos.params import parse_rational

from .errors import InputError, InvariantViolation, ResourceGuardError
from .graph import Graph, bfs_distances, complete, iter_bits, iter_cliques, mask_of, pair_density
from .oracles import max_clique_mask
from .reduced import Partition, ReducedMultigraph
from .simplex import maximize
from .utils import DEFAULT_MAX_CLIQUES

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultiEmbedding:
    """``assignment[h]`` is the cluster pattern vertex ``h`` is sent to."""

    pattern: Graph
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if len(self.assignment) != self.pattern.n:
            raise InputError(f"assignment covers {len(self.assignment)} of {self.pattern.n} pattern vertices")

    @classmethod
    def from_loads(cls, loads: Mapping[int, int]) -> "MultiEmbedding":
        """Clique embedding putting ``loads[i]`` pattern vertices into cluster ``i``."""
        assignment = [i for i in sorted(loads) for _ in range(loads[i])]
        return cls(complete(len(assignment)), tuple(assignment))

    def fibers(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = defaultdict(list)
        for h, i in enumerate(self.assignment):
            out[i].append(h)
        return {i: tuple(hs) for i, hs in sorted(out.items())}

    def loads(self) -> dict[int, int]:
        return {i: len(hs) for i, hs in self.fibers().items()}

    @property
    def clusters(self) -> frozenset[int]:
        return frozenset(self.assignment)


@dataclass(frozen=True)
class EmbeddingVerdict:
    violations: tuple[tuple[int, str], ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def conditions(self) -> set[int]:
        return {c for c, _ in self.violations}


def _fiber_shape_ok(h: Graph, fiber: tuple[int, ...]) -> bool:
    inner = sum(1 for a, b in combinations(fiber, 2) if h.has_edge(a, b))
    return (len(fiber), inner) in ((1, 0), (2, 1), (3, 2))


def validate_multi_embedding(me: MultiEmbedding, R: ReducedMultigraph) -> EmbeddingVerdict:
    """Check the four multi-embedding conditions, numbered as usual."""
    for i in me.assignment:
        if not 0 <= i < R.k:
            raise InputError(f"cluster {i} outside [0, {R.k})")
    h = me.pattern
    fibers = me.fibers()
    masks = {i: mask_of(hs) for i, hs in fibers.items()}
    found: list[tuple[int, str]] = []
    for i, hs in fibers.items():
        if not _fiber_shape_ok(h, hs):
            found.append((1, f"cluster {i} receives {hs}, not a vertex, an edge or a 2-path"))
    for a, b in h.edges():
        i, j = me.assignment[a], me.assignment[b]
        if i != j and R.mult[i][j] == 0:
            found.append((2, f"pattern edge ({a}, {b}) lands on non-adjacent clusters {i}, {j}"))
    for i, j in combinations(fibers, 2):
        joined = any(h.adj[a] & masks[j] for a in fibers[i])
        if joined and len(fibers[i]) >= 2 and len(fibers[j]) >= 2 and R.mult[i][j] != 2:
            found.append((3, f"clusters {i}, {j} both carry two or more vertices but share multiplicity {R.mult[i][j]}"))
    for i in fibers:
        reach = 0
        for a in fibers[i]:
            reach |= h.adj[a]
        for j in fibers:
            if j != i and (reach & masks[j]).bit_count() > 2:
                found.append((4, f"joint neighbourhood of cluster {i} holds more than two vertices of cluster {j}"))
    return EmbeddingVerdict(tuple(found))


def _adjacency_masks(R: ReducedMultigraph) -> tuple[list[int], list[int]]:
    single = [mask_of(j for j in range(R.k) if R.mult[i][j]) for i in range(R.k)]
    double = [mask_of(j for j in range(R.k) if R.mult[i][j] == 2) for i in range(R.k)]
    return single, double


def iter_kr_load_vectors(R: ReducedMultigraph, r: int, required: frozenset[int] = frozenset()) -> Iterator[dict[int, int]]:
    """Every way to load a cluster clique with ``r`` clique vertices.

    Loads are 1 or 2: a clique has no 2-path, so a fiber of three would be a
    triangle. Clusters carrying two vertices must be pairwise doubly joined.
    Results come in lexicographic order of (cluster, load) sequences.
    """
    if r < 1:
        raise InputError(f"clique size must be positive, got {r}")
    single, double = _adjacency_masks(R)
    need = mask_of(required)
    loads: dict[int, int] = {}

    def extend(avail: int, double_ok: int, remaining: int, covered: int) -> Iterator[dict[int, int]]:
        if remaining == 0:
            if covered & need == need:
                yield dict(loads)
            return
        while avail:
            low = avail & -avail
            c = low.bit_length() - 1
            avail ^= low
            # required clusters below c can no longer be picked
            if need & ~covered & (low - 1):
                return
            for load in (1, 2):
                if load > remaining or (load == 2 and not double_ok & low):
                    continue
                loads[c] = load
                yield from extend(
                    avail & single[c],
                    double_ok & double[c] if load == 2 else double_ok,
                    remaining - load,
                    covered | low,
                )
                del loads[c]

    yield from extend((1 << R.k) - 1, (1 << R.k) - 1, r, 0)


def find_kr_multi_embedding(R: ReducedMultigraph, r: int, pins=()) -> MultiEmbedding | None:
    """First ``K_r`` multi-embedding using every cluster in ``pins``."""
    if r < 2:
        raise InputError(f"r must be at least 2, got {r}")
    required = frozenset(pins)
    for i in required:
        if not 0 <= i < R.k:
            raise InputError(f"pinned cluster {i} outside [0, {R.k})")
    loads = next(iter_kr_load_vectors(R, r, required), None)
    return None if loads is None else MultiEmbedding.from_loads(loads)


def enumerate_kr_multi_embeddings(R: ReducedMultigraph, r: int, max_count: int = DEFAULT_MAX_CLIQUES) -> list[MultiEmbedding]:
    found = []
    for loads in iter_kr_load_vectors(R, r):
        found.append(MultiEmbedding.from_loads(loads))
        if len(found) > max_count:
            raise ResourceGuardError("max_cliques", max_count, f"enumerating K_{r} multi-embeddings")
    return found


@lru_cache(maxsize=256)
def _upsilon_table(R: ReducedMultigraph, r: int) -> tuple[int, ...]:
    # a cluster clique Q carries some K_r exactly when it holds a doubly
    # joined sub-clique of size r - |Q|
    single, double = _adjacency_masks(R)
    single_graph = Graph(R.k, tuple(single), validate=False)
    double_graph = Graph(R.k, tuple(double), validate=False)
    reach = [0] * R.k
    for size in range((r + 1) // 2, min(r, R.k) + 1):
        for support in iter_cliques(single_graph, size):
            q_mask = mask_of(support)
            if size < r and max_clique_mask(double_graph, within=q_mask).bit_count() < r - size:
                continue
            for v in support:
                reach[v] |= q_mask
    return tuple(reach)


def upsilon(R: ReducedMultigraph, r: int, v: int) -> frozenset[int]:
    """Clusters sharing some ``K_r`` multi-embedding with ``v``."""
    if not 0 <= v < R.k:
        raise InputError(f"cluster {v} outside [0, {R.k})")
    return frozenset(iter_bits(_upsilon_table(R, r)[v]))


def upsilon2(R: ReducedMultigraph, r: int, v: int) -> frozenset[int]:
    table = _upsilon_table(R, r)
    reach = 0
    for u in upsilon(R, r, v):
        reach |= table[u]
    return frozenset(iter_bits(reach))


@dataclass(frozen=True)
class FractionalMultiTiling:
    """Weights on ``K_r`` multi-embeddings; a cluster's load counts its fiber size."""

    r: int
    structures: tuple[MultiEmbedding, ...] = ()
    weights: tuple[Fraction, ...] = ()
    optimum: Fraction | None = field(default=None, compare=False)

    def cluster_loads(self) -> dict[int, Fraction]:
        load: dict[int, Fraction] = defaultdict(Fraction)
        for me, w in zip(self.structures, self.weights):
            for i, size in me.loads().items():
                load[i] += size * w
        return dict(load)

    @property
    def total_weight(self) -> Fraction:
        return sum((self.r * w for w in self.weights), Fraction(0))

    def problems(self, R: ReducedMultigraph) -> list[str]:
        found = []
        for me, w in zip(self.structures, self.weights):
            if me.pattern.n != self.r:
                found.append(f"structure {me.assignment} does not embed K_{self.r}")
            elif not validate_multi_embedding(me, R).valid:
                found.append(f"structure {me.assignment} is not a multi-embedding")
            if w < 0:
                found.append(f"negative weight {w}")
        for i, load in sorted(self.cluster_loads().items()):
            if load > 1:
                found.append(f"cluster {i} carries load {load} > 1")
        return found


def fractional_multi_tiling(R: ReducedMultigraph, r: int, max_count: int = DEFAULT_MAX_CLIQUES) -> FractionalMultiTiling:
    """Optimal fractional tiling of ``R`` with ``K_r``-embeddable structures."""
    structures = enumerate_kr_multi_embeddings(R, r, max_count)
    if not structures:
        return FractionalMultiTiling(r, optimum=Fraction(0))
    clusters = sorted({i for me in structures for i in me.assignment})
    row_of = {i: n for n, i in enumerate(clusters)}
    rows = [[0] * len(structures) for _ in clusters]
    for j, me in enumerate(structures):
        for i, size in me.loads().items():
            rows[row_of[i]][j] = size
    result = maximize([r] * len(structures), rows, [1] * len(clusters))
    kept = [(me, w) for me, w in zip(structures, result.x) if w]
    tiling = FractionalMultiTiling(r, tuple(me for me, _ in kept), tuple(w for _, w in kept), optimum=result.value)
    problems = tiling.problems(R)
    if problems:
        raise InvariantViolation(f"multi-embedding LP produced an invalid tiling: {problems[0]}")
    return tiling


@dataclass(frozen=True)
class StartResult:
    """Outcome of the start-embedding search for one vertex of ``G``."""

    embedding: MultiEmbedding | None
    q_v: frozenset[int]
    double_clique: frozenset[int] = frozenset()
    s_set: frozenset[int] = frozenset()
    t_set: frozenset[int] = frozenset()
    method: str = "none"

    @property
    def found(self) -> bool:
        return self.embedding is not None

    @property
    def outside_count(self) -> int:
        if self.embedding is None:
            return 0
        return sum(1 for i in self.embedding.assignment if i not in self.q_v)


def q_clusters(g: Graph, p: Partition, v: int, beta) -> frozenset[int]:
    """Clusters ``V_i`` with ``deg(v, V_i) >= β|V_i|``."""
    g.check_vertex(v)
    beta = parse_rational(beta)
    return frozenset(
        i for i, c in enumerate(p.clusters) if c and (g.adj[v] & mask_of(c)).bit_count() >= beta * len(c)
    )


def _clique_with_one_outside(single: list[int], size: int, s_mask: int, t_mask: int) -> list[int] | None:
    chosen: list[int] = []

    def extend(pool: int, need: int, t_left: int) -> bool:
        if need == 0:
            return True
        for c in iter_bits(pool):
            bit = 1 << c
            if bit & t_mask and not t_left:
                continue
            chosen.append(c)
            rest = pool & single[c] & ~((bit << 1) - 1)
            if extend(rest, need - 1, t_left - (1 if bit & t_mask else 0)):
                return True
            chosen.pop()
        return False

    return chosen if extend(s_mask | t_mask, size, 1) else None


def lemma_start_embedding(g: Graph, p: Partition, R: ReducedMultigraph, v: int, r: int, beta) -> StartResult:
    """``K_r`` multi-embedding with at most one vertex outside ``Q_v``.

    Loads two vertices on each cluster of a largest double-edge clique ``C``
    in ``Q_v`` and completes with single vertices in the joint neighbourhood,
    ``S`` inside ``Q_v`` and ``T`` outside, using at most one cluster of
    ``T``. When that scheme fails, every ``K_r`` multi-embedding is searched.
    """
    if r < 2:
        raise InputError(f"r must be at least 2, got {r}")
    q_v = q_clusters(g, p, v, beta)
    if not q_v:
        return StartResult(None, q_v)
    single, double = _adjacency_masks(R)
    q_mask = mask_of(q_v)
    double_graph = Graph(R.k, tuple(double[i] & q_mask if i in q_v else 0 for i in range(R.k)), validate=False)
    c_mask = max_clique_mask(double_graph, within=q_mask)
    clique = sorted(iter_bits(c_mask))
    doubled = clique[: r // 2]
    joint = (1 << R.k) - 1
    for c in doubled:
        joint &= single[c]
    s_mask, t_mask = joint & q_mask, joint & ~q_mask
    result_sets = dict(
        q_v=q_v,
        double_clique=frozenset(clique),
        s_set=frozenset(iter_bits(s_mask)),
        t_set=frozenset(iter_bits(t_mask)),
    )
    tail = _clique_with_one_outside(single, r - 2 * len(doubled), s_mask, t_mask)
    if tail is not None:
        loads = {c: 2 for c in doubled}
        loads.update({c: 1 for c in tail})
        me = MultiEmbedding.from_loads(loads)
        _check_embedding(me, R)
        return StartResult(me, method="double-clique", **result_sets)
    for loads in iter_kr_load_vectors(R, r):
        if sum(size for i, size in loads.items() if i not in q_v) <= 1:
            me = MultiEmbedding.from_loads(loads)
            _check_embedding(me, R)
            return StartResult(me, method="search", **result_sets)
    logger.debug(f"No start embedding for vertex {v}: |Q_v|={len(q_v)}, double clique {clique}")
    return StartResult(None, **result_sets)


def _check_embedding(me: MultiEmbedding, R: ReducedMultigraph) -> None:
    verdict = validate_multi_embedding(me, R)
    if not verdict.valid:
        raise InvariantViolation(f"constructed multi-embedding is invalid: {verdict.violations[0][1]}")


@dataclass(frozen=True)
class EmbedResult:
    mapping: dict[int, int] | None
    stuck_cluster: int | None = None
    relaxed_steps: int = 0
    message: str = ""

    @property
    def found(self) -> bool:
        return self.mapping is not None


def greedy_embed(
    g: Graph,
    p: Partition,
    R: ReducedMultigraph,
    me: MultiEmbedding,
    targets: Mapping[int, frozenset[int]] | None = None,
    pins: Mapping[int, int] | None = None,
    eps=Fraction(0),
) -> EmbedResult:
    """Realize the pattern of ``me`` inside ``g`` one fiber at a time.

    A candidate for a fiber is preferred when its degree into every target
    it constrains stays at least ``(d − ε)`` times the target size, ``d`` the
    measured pair density of the two clusters. Candidates below that floor
    are used only when nothing else keeps every later target nonempty.
    """
    eps = parse_rational(eps)
    h = me.pattern
    pins = dict(pins or {})
    if len(pins) > 2:
        raise InputError(f"at most two pinned vertices, got {len(pins)}")
    for a, x in pins.items():
        if not 0 <= a < h.n:
            raise InputError(f"pinned pattern vertex {a} outside [0, {h.n})")
        g.check_vertex(x)
    if len(pins) == 2:
        a, b = sorted(pins)
        if bfs_distances(h, a).get(b, h.n + 1) < 3:
            raise InputError(f"pinned pattern vertices {a} and {b} must be at distance at least 3")
        if pins[a] == pins[b]:
            raise InputError("pinned pattern vertices need distinct images")
    for i in me.assignment:
        if not 0 <= i < R.k:
            raise InputError(f"cluster {i} outside [0, {R.k})")

    target_masks = {}
    for i in set(me.assignment):
        allowed = p.clusters[i] if targets is None or i not in targets else targets[i]
        if not allowed <= p.clusters[i]:
            raise InputError(f"target set for cluster {i} leaves the cluster")
        target_masks[i] = mask_of(allowed)

    used = mask_of(pins.values())
    cand = {a: target_masks[me.assignment[a]] & ~used for a in range(h.n) if a not in pins}
    for a, x in pins.items():
        for b in iter_bits(h.adj[a]):
            if b in cand:
                cand[b] &= g.adj[x]
    mapping = dict(pins)
    density_cache: dict[tuple[int, int], Fraction] = {}

    def density(i: int, j: int) -> Fraction:
        key = (min(i, j), max(i, j))
        if key not in density_cache:
            density_cache[key] = pair_density(g, p.clusters[key[0]], p.clusters[key[1]])
        return density_cache[key]

    fibers = {i: tuple(a for a in hs if a not in pins) for i, hs in me.fibers().items()}
    order = sorted((i for i in fibers if fibers[i]), key=lambda i: (len(fibers[i]), i))
    relaxed = 0
    for i in order:
        fiber = fibers[i]
        outside = sorted({b for a in fiber for b in iter_bits(h.adj[a]) if b in cand and b not in fiber and b not in mapping})
        best = None
        for images in _fiber_candidates(g, h, fiber, cand):
            taken = mask_of(images)
            feasible, floor_ok = True, True
            for b in outside:
                left = cand[b] & ~taken
                for a, x in zip(fiber, images):
                    if h.has_edge(a, b):
                        left &= g.adj[x]
                        j = me.assignment[b]
                        if j != i and (g.adj[x] & cand[b]).bit_count() < (density(i, j) - eps) * cand[b].bit_count():
                            floor_ok = False
                if not left:
                    feasible = False
                    break
            if not feasible:
                continue
            if floor_ok:
                best = (images, True)
                break
            if best is None:
                best = (images, False)
        if best is None:
            return EmbedResult(None, stuck_cluster=i, relaxed_steps=relaxed, message=f"no admissible image for fiber {fiber} in cluster {i}")
        images, floor_ok = best
        relaxed += 0 if floor_ok else 1
        taken = mask_of(images)
        for a, x in zip(fiber, images):
            mapping[a] = x
            del cand[a]
        for b in cand:
            cand[b] &= ~taken
            for a, x in zip(fiber, images):
                if h.has_edge(a, b):
                    cand[b] &= g.adj[x]

    _verify_mapping(g, h, mapping, me, target_masks, pins)
    return EmbedResult(dict(sorted(mapping.items())), relaxed_steps=relaxed)


def _fiber_candidates(g: Graph, h: Graph, fiber: tuple[int, ...], cand: dict[int, int]) -> Iterator[tuple[int, ...]]:
    """Injective images of ``fiber`` inside the candidate sets, lexicographically."""
    images: list[int] = []

    def extend(pos: int, used: int) -> Iterator[tuple[int, ...]]:
        if pos == len(fiber):
            yield tuple(images)
            return
        pool = cand[fiber[pos]] & ~used
        for prev, x in zip(fiber, images):
            if h.has_edge(prev, fiber[pos]):
                pool &= g.adj[x]
        for x in iter_bits(pool):
            images.append(x)
            yield from extend(pos + 1, used | (1 << x))
            images.pop()

    yield from extend(0, 0)


def _verify_mapping(g: Graph, h: Graph, mapping: dict[int, int], me: MultiEmbedding, target_masks: dict[int, int], pins: dict[int, int]) -> None:
    if sorted(mapping) != list(range(h.n)):
        raise InvariantViolation("embedding does not cover every pattern vertex")
    if len(set(mapping.values())) != h.n:
        raise InvariantViolation("embedding is not injective")
    for a, b in h.edges():
        if not g.has_edge(mapping[a], mapping[b]):
            raise InvariantViolation(f"pattern edge ({a}, {b}) is not realized")
    for a, x in mapping.items():
        if a not in pins and not target_masks[me.assignment[a]] >> x & 1:
            raise InvariantViolation(f"pattern vertex {a} left its target set")
