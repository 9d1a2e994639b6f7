import pytest

from cliquelab.diamonds import DiamondPath, check_diamond_path, diamond_path_problems, find_diamond_path
from cliquelab.errors import InputError, InvariantViolation, ResourceGuardError
from cliquelab.graph import Graph, complete, disjoint_union
from cliquelab.tilings import Tiling


@pytest.fixture
def two_k4():
    """K_4 on 0..3 and K_4 on 3..6, sharing vertex 3."""
    edges = [(u, v) for block in ((0, 1, 2, 3), (3, 4, 5, 6)) for u in block for v in block if u < v]
    return Graph.from_edges(7, edges)


def test_clique_gives_shortest_path():
    path = find_diamond_path(complete(4), 0, 3, r=3)
    assert path == DiamondPath((0, 3), ((1, 2),))
    assert path.length == 2


def test_path_through_cut_vertex(two_k4):
    path = find_diamond_path(two_k4, 0, 6, r=3)
    assert path.spine == (0, 3, 6)
    assert path.gems == ((1, 2), (4, 5))
    assert path.vertices == frozenset(range(7))


def test_both_tilings_of_a_path(two_k4):
    path = find_diamond_path(two_k4, 0, 6, r=3)
    forward, backward = path.forward_cliques(), path.backward_cliques()
    assert forward == [(0, 1, 2), (3, 4, 5)]
    assert backward == [(1, 2, 3), (4, 5, 6)]
    assert Tiling(3, forward).is_valid(two_k4)
    assert Tiling(3, backward).is_valid(two_k4)


def test_excluded_cut_vertex_disconnects(two_k4):
    assert find_diamond_path(two_k4, 0, 6, r=3, excluded={3}) is None


def test_length_limit(two_k4):
    assert find_diamond_path(two_k4, 0, 6, r=3, max_len=2) is None


def test_disconnected_endpoints():
    g = disjoint_union(complete(4), complete(4))
    assert find_diamond_path(g, 0, 5, r=3) is None


def test_custom_gem_size():
    path = find_diamond_path(complete(6), 0, 5, r=4, gem_size=2)
    assert path.length == 2
    assert len(path.gems[0]) == 2


@pytest.mark.parametrize(
    "kwargs",
    [
        {"s": 0, "t": 0},
        {"s": 0, "t": 3, "max_len": 1},
        {"s": 0, "t": 3, "gem_size": 0},
        {"s": 0, "t": 3, "excluded": {0}},
        {"s": 0, "t": 9},
    ],
)
def test_find_rejects_bad_arguments(kwargs):
    with pytest.raises(InputError):
        find_diamond_path(complete(4), r=3, **kwargs)


def test_search_is_guarded(two_k4):
    with pytest.raises(ResourceGuardError) as info:
        find_diamond_path(two_k4, 0, 6, r=3, max_nodes=1)
    assert info.value.guard == "diamond_search_nodes"


def test_problems_of_broken_paths(two_k4):
    assert diamond_path_problems(two_k4, DiamondPath((0, 3, 6), ((1, 2), (4, 5))), 2) == []
    outside = DiamondPath((0, 6), ((1, 2),))
    assert any("joint neighbourhood" in p for p in diamond_path_problems(two_k4, outside, 2))
    reused = DiamondPath((0, 3, 6), ((1, 2), (1, 5)))
    assert any("disjoint" in p for p in diamond_path_problems(two_k4, reused, 2))
    short = DiamondPath((0, 3, 6), ((1, 2),))
    assert any("need 2 gems" in p for p in diamond_path_problems(two_k4, short, 2))
    assert any("size" in p for p in diamond_path_problems(two_k4, DiamondPath((0, 3), ((1,),)), 2))
    with pytest.raises(InvariantViolation):
        check_diamond_path(two_k4, outside, 2)
