"""Seeded generators for the graph families the experiments run on.

Every generator is a pure function of its parameters and seed. Generators
that certify a structural property (triangle-freeness, K_4-freeness) record
the check in ``GeneratedGraph.properties``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any

import numpy as np

from dtos.params import SphereParams, parse_rational

from .errors import InputError, InvariantViolation
from .graph import Graph, has_clique, min_degree
from .oracles import independence_number

if TYPE_CHECKING:
    from .reduced import ReducedMultigraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratedGraph:
    graph: Graph
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    parts: tuple[frozenset[int], ...] = ()
    cluster_of: tuple[int, ...] | None = None
    properties: dict[str, Any] = field(default_factory=dict)

    def metadata(self) -> dict[str, Any]:
        data = {
            "family": self.family,
            "params": self.params,
            "seed": self.seed,
            "n": self.graph.n,
            "m": self.graph.edge_count,
            "parts": [sorted(p) for p in self.parts],
            "properties": self.properties,
        }
        if self.cluster_of is not None:
            data["cluster_of"] = list(self.cluster_of)
        return data


def gnp(n: int, p, seed: int) -> Graph:
    """Erdős–Rényi ``G(n, p)``; pairs are drawn in lexicographic order."""
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    p = parse_rational(p)
    if not 0 <= p <= 1:
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def hs_extremal(n: int, r: int) -> Graph:
    """Independent set ``{0..n/r}`` joined completely to a clique on the rest."""
    if r < 2 or n % r:
        raise InputError(f"hs_extremal needs r >= 2 dividing n, got n={n}, r={r}")
    if n < 2 * r:
        raise InputError(f"hs_extremal needs n >= 2r, got n={n}, r={r}")
    size = n // r + 1
    edges = [(u, v) for u in range(n) for v in range(max(u + 1, size), n)]
    return Graph.from_edges(n, edges)


def two_cliques(n: int) -> Graph:
    """``K_{n/2+1}`` on ``0..n/2`` and ``K_{n/2-1}`` on the rest."""
    if n < 4 or n % 4:
        raise InputError(f"two_cliques needs 4 | n, got n={n}")
    split = n // 2 + 1
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if (u < split) == (v < split)]
    return Graph.from_edges(n, edges)


def bottleneck_extremal(n: int, r: int, tf: Graph) -> Graph:
    """Triangle-free ``tf`` on ``2n/r + 1`` vertices plus universal vertices."""
    if r < 4 or n % r:
        raise InputError(f"bottleneck_extremal needs r >= 4 dividing n, got n={n}, r={r}")
    if tf.n != 2 * n // r + 1:
        raise InputError(f"triangle-free part must have {2 * n // r + 1} vertices, got {tf.n}")
    if has_clique(tf, 3):
        raise InputError("the graph passed as triangle-free part contains a triangle")
    edges = list(tf.edges())
    edges.extend((u, v) for v in range(tf.n, n) for u in range(v))
    return Graph.from_edges(n, edges)


def bottleneck_degree_bound(n: int, r: int) -> Fraction:
    """``(1 - 2/r)n``; the bottleneck construction's minimum degree stays strictly above it."""
    return (1 - Fraction(2, r)) * n


def triangle_free_process(m: int, seed: int) -> Graph:
    """Maximal triangle-free graph from the random greedy edge process."""
    if m < 3:
        raise InputError(f"triangle_free_process needs m >= 3, got {m}")
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(m) for v in range(u + 1, m)]
    rng.shuffle(pairs)
    rows = [0] * m
    for u, v in pairs:
        if rows[u] & rows[v] == 0:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    g = Graph(m, tuple(rows), validate=False)
    if has_clique(g, 3):
        raise InvariantViolation("triangle-free process produced a triangle")
    return g


def _sphere_points(dim: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((count, dim + 1))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def _sphere_relations(params: SphereParams, seed: int) -> tuple[Graph, list[int]]:
    """Inner graph on one side and the cross-adjacency rows towards the copy."""
    m = params.points_per_side
    points = _sphere_points(params.dim, m, seed)
    # float64 points, so the rational thresholds are compared in floating point
    squared = 2.0 - 2.0 * (points @ points.T)
    inner = squared > float(params.inner_threshold_sq)
    cross = squared < float(params.cross_threshold_sq)
    np.fill_diagonal(inner, False)
    np.fill_diagonal(cross, True)
    rows = tuple(sum(1 << j for j in np.flatnonzero(inner[i]).tolist()) for i in range(m))
    cross_rows = [sum(1 << j for j in np.flatnonzero(cross[i]).tolist()) for i in range(m)]
    return Graph(m, rows), cross_rows


def bollobas_erdos(params: SphereParams, seed: int) -> GeneratedGraph:
    """Two copies of the same random points on the sphere.

    Inside a half, near-antipodal points are adjacent; across the halves,
    near-aligned points are (including each point and its own copy).
    """
    m = params.points_per_side
    half, cross_rows = _sphere_relations(params, seed)
    edges = list(half.edges())
    edges.extend((u + m, v + m) for u, v in half.edges())
    for i, row in enumerate(cross_rows):
        edges.extend((i, m + j) for j in range(m) if row >> j & 1)
    g = Graph.from_edges(2 * m, edges)
    v1, v2 = frozenset(range(m)), frozenset(range(m, 2 * m))
    properties = {
        "halves_triangle_free": not has_clique(half, 3),
        "k4_free": not has_clique(g, 4),
    }
    if not all(properties.values()):
        logger.warning(f"⚠️ Sphere graph (seed={seed}) failed certification: {properties}")
    return GeneratedGraph(
        graph=g,
        family="bollobas_erdos",
        params=params.model_dump(),
        seed=seed,
        parts=(v1, v2),
        properties=properties,
    )


def blow_up(g: Graph, s: int) -> GeneratedGraph:
    """Replace each vertex by an independent set of ``s`` copies.

    Copy ``i`` of vertex ``v`` is vertex ``v*s + i``; ``cluster_of`` maps it
    back to ``v``.
    """
    if s < 1:
        raise InputError(f"blow-up factor must be at least 1, got {s}")
    fiber = (1 << s) - 1
    fibers = [fiber << (v * s) for v in range(g.n)]
    rows = []
    for v in range(g.n):
        row = 0
        u_mask = g.adj[v]
        while u_mask:
            low = u_mask & -u_mask
            row |= fibers[low.bit_length() - 1]
            u_mask ^= low
        rows.extend([row] * s)
    blown = Graph(g.n * s, tuple(rows), validate=False)
    return GeneratedGraph(
        graph=blown,
        family="blow_up",
        params={"s": s, "base_n": g.n},
        cluster_of=tuple(x // s for x in range(g.n * s)),
    )


def gamma_graph(R: "ReducedMultigraph", y1: int, zeta, seed: int, dim: int = 6) -> GeneratedGraph:
    """Cluster graph over ``R`` with one fixed triangle-free graph per cluster.

    Double edges become complete joins, single edges the K_4-free sphere join
    and missing edges no join.
    """
    zeta = parse_rational(zeta)
    sphere = SphereParams(dim=dim, points_per_side=y1, zeta=zeta)
    inner, cross_rows = _sphere_relations(sphere, seed)
    k = R.k
    edges = []
    for i in range(k):
        base = i * y1
        edges.extend((base + u, base + v) for u, v in inner.edges())
        for j in range(i + 1, k):
            mult = R.mult[i][j]
            other = j * y1
            if mult == 2:
                edges.extend((base + a, other + b) for a in range(y1) for b in range(y1))
            elif mult == 1:
                edges.extend((base + a, other + b) for a in range(y1) for b in range(y1) if cross_rows[a] >> b & 1)
    g = Graph.from_edges(k * y1, edges)
    return GeneratedGraph(
        graph=g,
        family="gamma",
        params={"k": k, "y1": y1, "zeta": zeta, "dim": dim},
        seed=seed,
        parts=tuple(frozenset(range(i * y1, (i + 1) * y1)) for i in range(k)),
        cluster_of=tuple(x // y1 for x in range(k * y1)),
        properties={"clusters_triangle_free": not has_clique(inner, 3)},
    )


def extremal_properties(g: Graph) -> dict[str, Any]:
    """δ and α for the metadata sidecar of a small generated instance."""
    return {"min_degree": min_degree(g), "alpha": independence_number(g)} if g.n else {}

