from fractions import Fraction

import pytest

from cliquelab.constructions import blow_up, gnp
from cliquelab.errors import GraphParseError, InputError, ResourceGuardError
from cliquelab.graph import Graph, complete, path
from cliquelab.reduced import (
    Partition,
    ReducedMultigraph,
    build_reduced,
    check_regular_pair,
    check_slicing,
    format_multiplicity_csv,
    format_partition,
    format_reduced,
    multiplicity_for,
    parse_partition,
    parse_reduced,
    random_equipartition,
    read_partition,
    read_reduced,
    reduced_min_degree,
    refine_partition,
    slicing_epsilon,
    write_partition,
    write_reduced,
)
from dtos.params import RegularityParams

X = frozenset(range(4))
Y = frozenset(range(4, 8))


def complete_bipartite() -> Graph:
    return Graph.from_edges(8, [(i, j) for i in X for j in Y])


def crown() -> Graph:
    """K_{4,4} minus a perfect matching."""
    return Graph.from_edges(8, [(i, 4 + j) for i in range(4) for j in range(4) if i != j])


@pytest.mark.parametrize(
    "density,expected",
    [("1/5", 1), ("7/10", 2), ("69/100", 1), ("19/100", 0), ("1", 2), ("0", 0)],
)
def test_multiplicity_thresholds(density, expected):
    assert multiplicity_for(Fraction(density), Fraction(1, 5)) == expected


def test_multiplicity_flips_with_edge_count():
    beta = Fraction(1, 4)
    # a 2x2 cluster pair: 0, 1, 3 edges
    assert multiplicity_for(Fraction(0, 4), beta) == 0
    assert multiplicity_for(Fraction(1, 4), beta) == 1
    assert multiplicity_for(Fraction(2, 4), beta) == 1
    assert multiplicity_for(Fraction(3, 4), beta) == 2


def test_partition_requires_equal_clusters():
    with pytest.raises(InputError, match="equal size"):
        Partition(frozenset(), (frozenset({0, 1}), frozenset({2})))


def test_partition_check():
    g = complete(5)
    Partition(frozenset({4}), (frozenset({0, 1}), frozenset({2, 3}))).check(g)
    with pytest.raises(InputError, match="overlaps"):
        Partition(frozenset({4}), (frozenset({0, 1}), frozenset({1, 3}))).check(g)
    with pytest.raises(InputError, match="does not cover"):
        Partition(frozenset(), (frozenset({0, 1}), frozenset({2, 3}))).check(g)


def test_reduced_multigraph_validation():
    with pytest.raises(InputError, match="loop"):
        ReducedMultigraph(2, ((1, 1), (1, 0)))
    with pytest.raises(InputError, match="symmetric"):
        ReducedMultigraph(2, ((0, 1), (2, 0)))
    with pytest.raises(InputError, match="not 0, 1 or 2"):
        ReducedMultigraph.from_edges(2, {(0, 1): 3})
    with pytest.raises(InputError):
        ReducedMultigraph.from_edges(2, {(0, 2): 1})


def test_reduced_multigraph_queries():
    R = ReducedMultigraph.from_edges(4, {(0, 1): 2, (0, 2): 1, (2, 3): 2})
    assert R.degree(0) == 3
    assert R.neighbors(0) == [1, 2]
    assert R.double_neighbors(0) == [1]
    assert R.edges() == [(0, 1, 2), (0, 2, 1), (2, 3, 2)]
    assert reduced_min_degree(R) == 2
    assert reduced_min_degree(ReducedMultigraph(0, ())) == 0


def test_build_reduced_from_blow_up():
    g = blow_up(path(3), 2).graph
    p = Partition(frozenset(), (frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5})))
    R = build_reduced(g, p, RegularityParams(eps="1/10", beta="1/4"))
    assert R.mult == ((0, 2, 0), (2, 0, 2), (0, 2, 0))
    assert R.source[0] is p


def test_complete_pair_is_regular():
    verdict = check_regular_pair(complete_bipartite(), X, Y, "1/10")
    assert verdict.regular and verdict.exact
    assert verdict.density == 1
    assert verdict.witness is None


def test_random_half_density_pair_is_regular():
    g = gnp(24, "1/2", 0)
    verdict = check_regular_pair(g, range(12), range(12, 24), "9/20")
    assert verdict.regular and verdict.exact
    assert verdict.witness is None
    assert verdict.checked > 0


def test_lopsided_pair_is_irregular():
    g = Graph.from_edges(8, [(i, j) for i in (0, 1) for j in Y])
    verdict = check_regular_pair(g, X, Y, "1/4")
    assert not verdict.regular and verdict.exact
    assert verdict.density == Fraction(1, 2)
    wx, wy = verdict.witness
    assert wx <= X and wy <= Y
    assert abs(verdict.witness_density - verdict.density) > Fraction(1, 4)


def test_crown_regularity_depends_on_eps():
    g = crown()
    assert check_regular_pair(g, X, Y, "1/2").regular
    verdict = check_regular_pair(g, X, Y, "1/5")
    assert not verdict.regular
    assert verdict.witness_density == 0


def test_witness_sides_follow_arguments():
    g = Graph.from_edges(9, [(i, j) for i in (0, 1) for j in range(3, 9)])
    verdict = check_regular_pair(g, range(3, 9), range(3), "1/4")
    assert not verdict.regular
    wx, wy = verdict.witness
    assert wx <= frozenset(range(3, 9)) and wy <= frozenset(range(3))


def test_exhaustive_check_is_guarded():
    g = complete(34)
    with pytest.raises(ResourceGuardError) as info:
        check_regular_pair(g, range(17), range(17, 34), "1/10")
    assert info.value.guard == "max_side"


def test_sampled_check_cannot_certify():
    verdict = check_regular_pair(complete_bipartite(), X, Y, "1/10", mode="sampled", trials=50, seed=3)
    assert verdict.regular and not verdict.exact
    assert verdict.checked == 50


def test_sampled_check_finds_irregularity():
    g = Graph.from_edges(8, [(i, j) for i in (0, 1) for j in Y])
    verdict = check_regular_pair(g, X, Y, "1/10", mode="sampled", trials=500, seed=0)
    assert not verdict.regular and verdict.exact


def test_unknown_regularity_mode():
    with pytest.raises(InputError):
        check_regular_pair(complete_bipartite(), X, Y, "1/10", mode="spectral")


def test_slicing_epsilon():
    assert slicing_epsilon("1/10", "1/2") == Fraction(1, 5)
    assert slicing_epsilon("1/10", "1/4") == Fraction(2, 5)
    assert slicing_epsilon("1/10", "1") == Fraction(1, 5)
    with pytest.raises(InputError):
        slicing_epsilon("1/10", "0")


def test_slicing_on_complete_pair():
    verdict = check_slicing(complete_bipartite(), X, Y, "1/4", "1/2", {0, 1}, {4, 5})
    assert verdict.holds
    assert verdict.density_gap == 0
    assert verdict.eps_sub == Fraction(1, 2)


def test_slicing_on_crown():
    verdict = check_slicing(crown(), X, Y, "2/5", "1/2", {0, 1}, {4, 5})
    assert verdict.parent_regular and verdict.sub_regular
    assert verdict.density_gap == Fraction(1, 4)
    assert verdict.holds


def test_slicing_rejects_bad_subpairs():
    g = complete_bipartite()
    with pytest.raises(InputError, match="inside"):
        check_slicing(g, X, Y, "1/4", "1/2", {0, 7}, {4, 5})
    with pytest.raises(InputError, match="share"):
        check_slicing(g, X, Y, "1/4", "1/2", {0}, {4, 5})
    with pytest.raises(InputError, match="exceed"):
        check_slicing(g, X, Y, "1/2", "1/2", {0, 1}, {4, 5})


def test_random_equipartition():
    p = random_equipartition(10, 3, seed=4)
    assert p.k == 3 and p.m == 3
    assert len(p.exceptional) == 1
    p.check(complete(10))
    assert random_equipartition(10, 3, seed=4) == p
    with pytest.raises(InputError):
        random_equipartition(3, 4, seed=0)


def test_refine_partition():
    p = random_equipartition(14, 2, seed=1)
    q = refine_partition(p, 3)
    assert q.k == 6 and q.m == 2
    assert len(q.exceptional) == 2
    q.check(complete(14))
    for c in q.clusters:
        assert any(c <= parent for parent in p.clusters)
    with pytest.raises(InputError):
        refine_partition(p, 8)


def test_format_partition():
    p = Partition(frozenset({4}), (frozenset({0, 2}), frozenset({1, 3})))
    assert format_partition(p) == "# partition k=2 m=2\n0: 4\n1: 0 2\n2: 1 3\n"
    assert parse_partition(format_partition(p).splitlines()) == p


def test_partition_without_exceptional_vertices(tmp_path):
    p = Partition(frozenset(), (frozenset({0, 1}), frozenset({2, 3})))
    target = tmp_path / "nested" / "p.txt"
    write_partition(p, target)
    assert read_partition(target) == p


@pytest.mark.parametrize(
    "text,line",
    [("0: 1\n1 2 3\n", 2), ("0: 1\n1: a\n", 2), ("0: 1\n0: 2\n", 2)],
)
def test_parse_partition_errors(text, line):
    with pytest.raises(GraphParseError) as info:
        parse_partition(text.splitlines())
    assert info.value.line_number == line


def test_parse_partition_needs_consecutive_parts():
    with pytest.raises(GraphParseError):
        parse_partition(["0: 1", "2: 3 4"])
    with pytest.raises(GraphParseError):
        parse_partition(["# nothing"])


def test_reduced_formats(tmp_path):
    R = ReducedMultigraph.from_edges(3, {(0, 1): 2, (1, 2): 1})
    assert format_reduced(R) == "# reduced k=3\n0 1 2\n1 2 1\n"
    assert format_multiplicity_csv(R) == "cluster,0,1,2\n0,0,2,0\n1,2,0,1\n2,0,1,0\n"
    write_reduced(R, tmp_path / "r.txt")
    assert read_reduced(tmp_path / "r.txt") == R


def test_parse_reduced_errors():
    with pytest.raises(GraphParseError, match="header"):
        parse_reduced(["0 1 2"])
    with pytest.raises(GraphParseError) as info:
        parse_reduced(["# reduced k=2", "0 1"])
    assert info.value.line_number == 2
    with pytest.raises(GraphParseError, match="cluster count") as info:
        parse_reduced(["# reduced k=two", "0 1 2"])
    assert info.value.line_number == 1
