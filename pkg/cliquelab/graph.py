"""Graph representation and the density arithmetic every other module uses.

Vertices are dense integer indices ``0..n-1``. Adjacency is stored as one
Python ``int`` bitmask per vertex, so neighbourhood intersections are a
single ``&`` and degrees into a set are a popcount.
"""

from __future__ import annotations

import logging
from dataclasses import InitVar, dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InputError

logger = logging.getLogger(__name__)

VertexSet = frozenset  # of int


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> list[int]:
    return list(iter_bits(mask))


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on ``0..n-1`` with bitset rows."""

    n: int
    adj: tuple[int, ...]
    _edge_count: int = field(default=-1, compare=False, repr=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        if len(self.adj) != self.n:
            raise InputError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        total = sum(row.bit_count() for row in self.adj)
        object.__setattr__(self, "_edge_count", total // 2)
        if not validate:
            return
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise InputError(f"vertex {v} has a neighbour outside [0, {self.n})")
            if row >> v & 1:
                raise InputError(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise InputError(f"adjacency not symmetric at ({v}, {u})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), validate=False)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise InputError(f"vertex {v!r} out of range [0, {self.n})")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                yield u, u + 1 + v

    def common_neighbors_mask(self, vertices: Iterable[int]) -> int:
        mask = self.full_mask
        for v in vertices:
            mask &= self.adj[v]
        return mask

    def is_clique(self, vertices: Iterable[int]) -> bool:
        members = list(vertices)
        m = mask_of(members)
        return all((self.adj[v] | (1 << v)) & m == m for v in members)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        members = list(vertices)
        m = mask_of(members)
        return all(self.adj[v] & m == 0 for v in members)

    def complement(self) -> "Graph":
        full = self.full_mask
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)), validate=False)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def check_vertex_set(g: Graph, members: Iterable[int]) -> VertexSet:
    """Validate ``members`` against ``g`` and return them as a VertexSet."""
    members = list(members)
    for v in members:
        g.check_vertex(v)
    result = frozenset(members)
    if len(result) != len(members):
        raise InputError(f"vertex set has duplicate members: {sorted(members)}")
    return result


def degree_into(g: Graph, v: int, s: Iterable[int]) -> int:
    """``|N(v) ∩ s|``."""
    g.check_vertex(v)
    return (g.adj[v] & mask_of(check_vertex_set(g, s))).bit_count()


def cross_edge_count(g: Graph, x: Iterable[int], y: Iterable[int]) -> int:
    y_mask = mask_of(y)
    return sum((g.adj[u] & y_mask).bit_count() for u in x)


def pair_density(g: Graph, x: Iterable[int], y: Iterable[int]) -> Fraction:
    """Exact density ``deg(X, Y) / (|X| |Y|)`` of a disjoint pair."""
    xs = check_vertex_set(g, x)
    ys = check_vertex_set(g, y)
    if not xs or not ys:
        raise InputError("pair_density needs two nonempty sets")
    if xs & ys:
        raise InputError(f"pair_density needs disjoint sets, shared {sorted(xs & ys)}")
    return Fraction(cross_edge_count(g, xs, ys), len(xs) * len(ys))


def min_degree(g: Graph) -> int:
    if g.n < 1:
        raise InputError("min_degree of the empty graph is undefined")
    return min(row.bit_count() for row in g.adj)


def max_degree(g: Graph) -> int:
    if g.n < 1:
        raise InputError("max_degree of the empty graph is undefined")
    return max(row.bit_count() for row in g.adj)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph on ``vertices`` relabelled to ``0..k-1``.

    Returns the subgraph and the list mapping new labels to old ones.
    """
    order = sorted(check_vertex_set(g, vertices))
    position = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        row = 0
        for u in iter_bits(g.adj[v] & mask_of(order)):
            row |= 1 << position[u]
        rows.append(row)
    return Graph(len(order), tuple(rows), validate=False), order


def relabel(g: Graph, permutation: list[int]) -> Graph:
    """Graph with vertex ``v`` renamed to ``permutation[v]``."""
    if sorted(permutation) != list(range(g.n)):
        raise InputError("relabel needs a permutation of 0..n-1")
    return Graph.from_edges(g.n, ((permutation[u], permutation[v]) for u, v in g.edges()))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = ((u + g.n, v + g.n) for u, v in h.edges())
    return Graph.from_edges(g.n + h.n, [*g.edges(), *shifted])


def complete(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)), validate=False)


def empty(n: int) -> Graph:
    return Graph(n, (0,) * n)


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputError(f"cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, ((v, (v + 1) % n) for v in range(n)))


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((v, v + 1) for v in range(n - 1)))


def star(n: int) -> Graph:
    if n < 2:
        raise InputError(f"star needs at least 2 vertices, got {n}")
    return Graph.from_edges(n, ((0, v) for v in range(1, n)))


def iter_cliques(g: Graph, k: int, within: int | None = None) -> Iterator[tuple[int, ...]]:
    """All ``k``-cliques inside the vertex mask ``within``, in lexicographic order."""
    if k < 0:
        raise InputError(f"clique size must be non-negative, got {k}")
    candidates = g.full_mask if within is None else within & g.full_mask
    adj = g.adj
    chosen: list[int] = []

    def extend(pool: int, need: int) -> Iterator[tuple[int, ...]]:
        if need == 0:
            yield tuple(chosen)
            return
        while pool and pool.bit_count() >= need:
            low = pool & -pool
            v = low.bit_length() - 1
            pool ^= low
            chosen.append(v)
            yield from extend(pool & adj[v], need - 1)
            chosen.pop()

    yield from extend(candidates, k)


def first_clique(g: Graph, k: int, within: int | None = None) -> tuple[int, ...] | None:
    return next(iter_cliques(g, k, within), None)


def has_clique(g: Graph, k: int, within: int | None = None) -> bool:
    return first_clique(g, k, within) is not None


def bfs_distances(g: Graph, source: int, within: int | None = None) -> dict[int, int]:
    """Hop distances from ``source`` inside the vertex mask ``within``."""
    g.check_vertex(source)
    allowed = g.full_mask if within is None else within | (1 << source)
    dist = {source: 0}
    seen = 1 << source
    frontier = seen
    depth = 0
    while frontier:
        depth += 1
        reach = 0
        for v in iter_bits(frontier):
            reach |= g.adj[v]
        frontier = reach & allowed & ~seen
        seen |= frontier
        for v in iter_bits(frontier):
            dist[v] = depth
    return dist
