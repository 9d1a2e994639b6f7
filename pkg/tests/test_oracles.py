import random
from fractions import Fraction
from itertools import combinations

import pytest

from cliquelab.constructions import gnp, hs_extremal, two_cliques
from cliquelab.errors import InputError, ResourceGuardError
from cliquelab.graph import complete, cycle, disjoint_union, empty, has_clique, mask_of, relabel
from cliquelab.oracles import (
    alpha_ell,
    enumerate_kr,
    erdos_sos_clique,
    find_kr_factor,
    has_kr_factor,
    independence_number,
    max_fractional_tiling,
    max_independent_set,
    max_kr_tiling,
    satisfies_threshold,
)
from dtos.params import ThresholdParams
from tests.helpers import brute_independence_number, brute_max_tiling_count, networkx_alpha


def test_independence_number_examples(c5):
    assert independence_number(complete(6)) == 1
    assert independence_number(c5) == 2
    assert independence_number(disjoint_union(complete(7), complete(5))) == 2
    with pytest.raises(InputError):
        independence_number(empty(0))


@pytest.mark.parametrize("seed", range(10))
def test_independence_number_matches_brute_force(seed):
    g = gnp(12, Fraction(2, 5), seed)
    assert independence_number(g) == brute_independence_number(g)
    assert independence_number(g) == networkx_alpha(g)


def test_max_independent_set_is_independent():
    g = gnp(15, Fraction(1, 2), 2)
    s = max_independent_set(g)
    assert g.is_independent(s)
    assert len(s) == independence_number(g)


def test_alpha_ell_examples(c5):
    assert alpha_ell(complete(5), 3) == 2
    assert alpha_ell(c5, 3) == 5
    assert alpha_ell(c5, 2) == independence_number(c5)
    with pytest.raises(InputError):
        alpha_ell(c5, 1)


@pytest.mark.parametrize("seed", range(4))
def test_alpha_ell_matches_brute_force(seed):
    g = gnp(10, Fraction(3, 5), seed)
    for ell in (3, 4):
        expected = max(
            len(s)
            for size in range(g.n + 1)
            for s in combinations(range(g.n), size)
            if not has_clique(g, ell, mask_of(s))
        )
        assert alpha_ell(g, ell) == expected


def test_enumerate_kr(k4, c5):
    assert enumerate_kr(k4, 3) == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    assert enumerate_kr(c5, 3) == []
    assert len(enumerate_kr(complete(7), 4)) == 35
    with pytest.raises(InputError):
        enumerate_kr(k4, 1)


def test_enumerate_kr_guard():
    with pytest.raises(ResourceGuardError) as excinfo:
        enumerate_kr(complete(10), 3, max_cliques=5)
    assert excinfo.value.guard == "max_cliques"


def test_max_kr_tiling_examples(c5):
    t = max_kr_tiling(complete(7), 3)
    assert len(t) == 2 and t.covered_count == 6
    assert len(max_kr_tiling(c5, 3)) == 0
    t = max_kr_tiling(two_cliques(12), 3)
    assert t.covered_count == 9
    assert t.is_valid(two_cliques(12), pure=True)


def test_max_kr_tiling_is_deterministic():
    g = gnp(14, Fraction(7, 10), 5)
    assert max_kr_tiling(g, 3) == max_kr_tiling(g, 3)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("r", [2, 3, 4])
def test_max_kr_tiling_matches_brute_force(seed, r):
    g = gnp(11, Fraction(3, 5), seed)
    t = max_kr_tiling(g, r)
    assert t.is_valid(g, pure=True)
    assert len(t) == brute_max_tiling_count(g, r)


def test_max_kr_tiling_guard():
    with pytest.raises(ResourceGuardError):
        max_kr_tiling(complete(12), 3, max_nodes=1)


def test_has_kr_factor_examples():
    assert has_kr_factor(complete(8), 4)
    assert not has_kr_factor(hs_extremal(8, 4), 4)
    assert not has_kr_factor(two_cliques(12), 3)
    assert not has_kr_factor(two_cliques(12), 2)


def test_find_kr_factor_returns_spanning_witness():
    g = gnp(12, Fraction(9, 10), 1)
    factor = find_kr_factor(g, 3)
    if factor is not None:
        assert factor.is_spanning(g)
    assert (factor is not None) == (len(max_kr_tiling(g, 3)) == 4)


def test_factor_needs_divisibility():
    assert find_kr_factor(complete(7), 3) is None
    assert not has_kr_factor(complete(7), 3)


@pytest.mark.parametrize("seed", range(6))
def test_large_independent_set_blocks_factor(seed):
    # alpha >= n/r + 1 leaves too few cliques for every independent vertex
    g = gnp(12, Fraction(1, 2), seed)
    if independence_number(g) >= 12 // 3 + 1:
        assert not has_kr_factor(g, 3)


def test_fractional_examples(c5, k4):
    ft = max_fractional_tiling(c5, 2)
    assert ft.optimum == ft.total_weight == 5
    assert set(ft.weights) == {Fraction(1, 2)}
    assert max_fractional_tiling(k4, 4).total_weight == 4
    ft = max_fractional_tiling(complete(7), 3)
    assert ft.total_weight == 7
    assert all(load == 1 for load in ft.vertex_weights().values())


def test_fractional_without_cliques_is_zero(c5):
    ft = max_fractional_tiling(c5, 3)
    assert ft.total_weight == 0 and ft.optimum == 0


@pytest.mark.parametrize("seed", range(5))
def test_fractional_dominates_integral(seed):
    g = gnp(10, Fraction(3, 5), seed)
    for r in (2, 3):
        ft = max_fractional_tiling(g, r)
        assert ft.is_valid(g)
        assert ft.total_weight >= r * len(max_kr_tiling(g, r))


@pytest.mark.parametrize("seed", range(3))
def test_fractional_optimum_invariant_under_relabelling(seed):
    g = gnp(9, Fraction(1, 2), seed)
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    assert max_fractional_tiling(g, 3).optimum == max_fractional_tiling(relabel(g, perm), 3).optimum


def test_satisfies_threshold():
    verdict = satisfies_threshold(complete(8), ThresholdParams(r=4, mu="1/10", gamma="1/2"))
    assert verdict.holds
    verdict = satisfies_threshold(hs_extremal(8, 4), ThresholdParams(r=4, mu="1/10", gamma="1/4"))
    assert verdict.degree_ok
    assert not verdict.alpha_ok
    assert verdict.clauses() == {"min_degree": True, "independence": False, "divisibility": True}
    verdict = satisfies_threshold(complete(9), ThresholdParams(r=4, mu="1/10", gamma="1/2"))
    assert not verdict.divisible and not verdict.holds


def test_erdos_sos_clique(c5):
    assert erdos_sos_clique(complete(6), 3, {2, 3, 4, 5}) == frozenset({2, 3, 4})
    assert erdos_sos_clique(c5, 3) is None
    assert erdos_sos_clique(c5, 2) == frozenset({0, 1})
