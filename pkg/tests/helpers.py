from itertools import combinations

import networkx as nx

from cliquelab.graph import Graph


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def brute_independence_number(g: Graph) -> int:
    """Grow the size until no independent subset of that size is left."""
    best = 0
    for size in range(1, g.n + 1):
        if not any(g.is_independent(s) for s in combinations(range(g.n), size)):
            break
        best = size
    return best


def brute_max_tiling_count(g: Graph, r: int) -> int:
    """Largest number of disjoint K_r's: the lowest free vertex is skipped or covered."""
    through = {v: [] for v in range(g.n)}
    for c in combinations(range(g.n), r):
        if g.is_clique(c):
            through[c[0]].append(frozenset(c))
    memo: dict[frozenset, int] = {}

    def best(avail: frozenset) -> int:
        if len(avail) < r:
            return 0
        if avail in memo:
            return memo[avail]
        v = min(avail)
        top = best(avail - {v})
        for c in through[v]:
            if c <= avail:
                top = max(top, 1 + best(avail - c))
        memo[avail] = top
        return top

    return best(frozenset(range(g.n)))


def networkx_alpha(g: Graph) -> int:
    _, weight = nx.max_weight_clique(nx.complement(to_networkx(g)), weight=None)
    return weight


def random_multigraph(rng, k: int, p2: float, p1: float):
    from cliquelab.reduced import ReducedMultigraph

    edges = {}
    for i, j in combinations(range(k), 2):
        x = rng.random()
        edges[(i, j)] = 2 if x < p2 else 1 if x < p2 + p1 else 0
    return ReducedMultigraph.from_edges(k, edges)


def dense_multigraph(rng, k: int, r: int):
    """Random multigraph with multiplicity min degree above (1 - 2/r) 2k."""
    from cliquelab.reduced import reduced_min_degree

    while True:
        p2 = rng.uniform(0.6, 0.97)
        R = random_multigraph(rng, k, p2, (1 - p2) / 2)
        if reduced_min_degree(R) * r > (r - 2) * 2 * k:
            return R


def fiber_conditions(pattern: Graph, assignment, R) -> set[int]:
    """Violated multi-embedding conditions, recomputed with networkx."""
    h = to_networkx(pattern)
    fibers: dict[int, set[int]] = {}
    for a, i in enumerate(assignment):
        fibers.setdefault(i, set()).add(a)
    shapes = [nx.path_graph(1), nx.path_graph(2), nx.path_graph(3)]
    found = set()
    for members in fibers.values():
        if not any(nx.is_isomorphic(h.subgraph(members), s) for s in shapes):
            found.add(1)
    for a, b in h.edges():
        i, j = assignment[a], assignment[b]
        if i != j and R.mult[i][j] == 0:
            found.add(2)
    for i, j in combinations(fibers, 2):
        joined = any(h.has_edge(a, b) for a in fibers[i] for b in fibers[j])
        if joined and len(fibers[i]) >= 2 and len(fibers[j]) >= 2 and R.mult[i][j] != 2:
            found.add(3)
    for i in fibers:
        around = set().union(*(set(h[a]) for a in fibers[i]))
        for j in fibers:
            if j != i and len(around & fibers[j]) > 2:
                found.add(4)
    return found
