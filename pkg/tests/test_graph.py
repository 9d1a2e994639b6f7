import random
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from cliquelab.errors import InputError
from cliquelab.graph import (
    Graph,
    bfs_distances,
    complete,
    cycle,
    degree_into,
    disjoint_union,
    empty,
    induced_subgraph,
    iter_cliques,
    min_degree,
    pair_density,
    relabel,
    star,
)
from cliquelab.constructions import gnp
from tests.helpers import to_networkx


def test_degree_into(k4, c5):
    assert degree_into(k4, 0, {1, 2, 3}) == 3
    assert degree_into(empty(5), 2, {0, 1, 3}) == 0
    assert degree_into(c5, 0, {1, 2, 3}) == 1


def test_degree_into_rejects_bad_vertex(k4):
    with pytest.raises(InputError):
        degree_into(k4, 4, {0})
    with pytest.raises(InputError):
        degree_into(k4, 0, {7})


def test_pair_density():
    c4 = cycle(4)
    assert pair_density(c4, {0, 2}, {1, 3}) == 1
    assert pair_density(empty(4), {0, 1}, {2, 3}) == 0
    assert pair_density(complete(6), {0, 1, 2}, {3, 4, 5}) == 1
    assert pair_density(cycle(6), {0, 1}, {2, 3}) == Fraction(1, 4)


def test_pair_density_is_symmetric():
    g = gnp(12, Fraction(1, 2), 3)
    x, y = {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9, 10, 11}
    assert pair_density(g, x, y) == pair_density(g, y, x)


@pytest.mark.parametrize("x, y", [({0, 1}, {1, 2}), (set(), {1}), ({0}, set())])
def test_pair_density_rejects_overlap_and_empty(x, y):
    with pytest.raises(InputError):
        pair_density(complete(4), x, y)


def test_min_degree():
    assert min_degree(complete(5)) == 4
    assert min_degree(star(5)) == 1
    assert min_degree(disjoint_union(complete(7), complete(5))) == 4
    with pytest.raises(InputError):
        min_degree(empty(0))


def test_handshake_and_degree_into_identity():
    g = gnp(20, Fraction(3, 10), 11)
    assert sum(g.degree(v) for v in range(g.n)) == 2 * g.edge_count
    for v in range(g.n):
        assert degree_into(g, v, set(range(g.n)) - {v}) == g.degree(v)


def test_constructor_validates_adjacency():
    with pytest.raises(InputError):
        Graph(2, (0b10, 0b00))
    with pytest.raises(InputError):
        Graph(2, (0b01, 0b00))
    with pytest.raises(InputError):
        Graph(2, (0b100, 0b000))
    with pytest.raises(InputError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(InputError):
        Graph.from_edges(3, [(0, 3)])


def test_edges_are_lexicographic():
    g = Graph.from_edges(4, [(3, 1), (2, 0), (0, 1)])
    assert list(g.edges()) == [(0, 1), (0, 2), (1, 3)]


def test_complement_of_complete_is_empty(k4):
    assert k4.complement().edge_count == 0
    assert empty(4).complement() == k4


@pytest.mark.parametrize("seed", range(5))
def test_iter_cliques_matches_networkx(seed):
    g = gnp(14, Fraction(3, 5), seed)
    h = to_networkx(g)
    for k in (2, 3, 4):
        expected = sorted(
            tuple(sorted(c)) for c in combinations(range(g.n), k) if h.subgraph(c).number_of_edges() == k * (k - 1) // 2
        )
        assert list(iter_cliques(g, k)) == expected


def test_iter_cliques_within_mask(k4):
    assert list(iter_cliques(k4, 2, within=0b0111)) == [(0, 1), (0, 2), (1, 2)]
    assert list(iter_cliques(k4, 0)) == [()]


def test_induced_subgraph_relabels():
    sub, order = induced_subgraph(cycle(6), {1, 2, 3, 5})
    assert order == [1, 2, 3, 5]
    assert sorted(sub.edges()) == [(0, 1), (1, 2)]


def test_relabel_preserves_structure():
    g = gnp(10, Fraction(1, 2), 4)
    perm = list(range(10))
    random.Random(1).shuffle(perm)
    h = relabel(g, perm)
    assert h.edge_count == g.edge_count
    assert all(h.has_edge(perm[u], perm[v]) for u, v in g.edges())
    with pytest.raises(InputError):
        relabel(g, [0] * 10)


def test_bfs_distances_match_networkx():
    g = gnp(16, Fraction(1, 5), 8)
    expected = nx.single_source_shortest_path_length(to_networkx(g), 0)
    assert bfs_distances(g, 0) == dict(expected)


def test_bfs_distances_respects_mask():
    g = cycle(6)
    allowed = 0b000110
    assert bfs_distances(g, 0, within=allowed) == {0: 0, 1: 1, 2: 2}


def test_named_families_reject_small_sizes():
    with pytest.raises(InputError):
        cycle(2)
    with pytest.raises(InputError):
        star(1)
