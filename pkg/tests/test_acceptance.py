"""Property suites over seeded instance families; the long ones are marked slow."""

import random
from fractions import Fraction
from itertools import product

import networkx as nx
import pytest

from cliquelab.absorbers import build_absorbing_set, build_s_absorber, full_pipeline, is_s_t_absorber, is_xi_absorbing
from cliquelab.constructions import bollobas_erdos, bottleneck_extremal, gnp, hs_extremal, two_cliques
from cliquelab.embeddings import MultiEmbedding, upsilon, upsilon2, validate_multi_embedding
from cliquelab.graph import Graph, complete, cycle, has_clique, induced_subgraph, min_degree, pair_density
from cliquelab.oracles import find_kr_factor, independence_number, max_fractional_tiling, max_kr_tiling
from cliquelab.tiling import augment_to_target, augment_with_history, check_trace, flatten_in_blowup, tiling_to_fractional
from dtos.params import AbsorberParams, AugmentParams, SphereParams
from tests.helpers import (
    brute_independence_number,
    brute_max_tiling_count,
    dense_multigraph,
    fiber_conditions,
    random_multigraph,
)


def test_extremal_constructions_are_tight():
    for n in (8, 12, 16):
        g = hs_extremal(n, 4)
        assert min_degree(g) == n - n // 4 - 1
        assert independence_number(g) == n // 4 + 1
        assert find_kr_factor(g, 4) is None
    for n in (12, 16, 20):
        g = two_cliques(n)
        assert independence_number(g) == 2
        assert min_degree(g) == n // 2 - 2
        assert find_kr_factor(g, 2) is None
        assert find_kr_factor(g, 3) is None
    assert find_kr_factor(bottleneck_extremal(16, 4, cycle(9)), 4) is None


@pytest.mark.slow
def test_oracles_match_exhaustive_search():
    densities = [Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)]
    for seed in range(200):
        n = 8 + seed % 11
        g = gnp(n, densities[seed % 3], seed)
        assert independence_number(g) == brute_independence_number(g), (n, seed)
        assert len(max_kr_tiling(g, 3)) == brute_max_tiling_count(g, 3), (n, seed)


def test_lp_dominates_and_is_exact():
    assert max_fractional_tiling(cycle(5), 2).total_weight == 5
    assert max_fractional_tiling(complete(7), 3).total_weight == 7
    suite = [hs_extremal(8, 4), two_cliques(12), cycle(7)] + [gnp(12, "7/10", seed) for seed in range(6)]
    for g in suite:
        for r in (2, 3, 4):
            ft = max_fractional_tiling(g, r)
            assert ft.is_valid(g)
            assert ft.total_weight >= r * len(max_kr_tiling(g, r))


@pytest.mark.slow
def test_augmentation_tracks_the_exact_optimum():
    p = AugmentParams(r=4)
    for seed in range(50):
        g = gnp(24, "17/20", seed)
        run = augment_with_history(g, 4, p)
        exact = 4 * len(max_kr_tiling(g, 4))
        assert run.tiling.covered_count >= exact - 4, seed
        assert list(run.coverage) == sorted(run.coverage)
        for trace in run.traces:
            check_trace(g, trace)


@pytest.mark.slow
@pytest.mark.parametrize("r", [4, 5, 6, 8])
def test_upsilon_structure_on_dense_multigraphs(r):
    rng = random.Random(1000 + r)
    for _ in range(250):
        R = dense_multigraph(rng, rng.randint(3, 10), r)
        for v in range(R.k):
            assert set(R.double_neighbors(v)) <= upsilon(R, r + 1, v)
            assert 2 * len(upsilon2(R, r + 1, v)) >= R.k


@pytest.mark.slow
def test_validator_agrees_on_every_small_pattern():
    rng = random.Random(6)
    patterns = [h for h in nx.graph_atlas_g() if 1 <= h.number_of_nodes() <= 5]
    for h in patterns:
        pattern = Graph.from_edges(h.number_of_nodes(), h.edges())
        for k in (1, 2, 3, 4):
            R = random_multigraph(rng, k, 0.4, 0.3)
            for assignment in product(range(k), repeat=pattern.n):
                verdict = validate_multi_embedding(MultiEmbedding(pattern, assignment), R)
                assert verdict.conditions() == fiber_conditions(pattern, assignment, R), (h.edges(), assignment)


@pytest.mark.slow
def test_sphere_graphs_are_certified():
    params = SphereParams(dim=6, points_per_side=30, zeta="1/8")
    for seed in range(100):
        generated = bollobas_erdos(params, seed)
        g = generated.graph
        v1, v2 = generated.parts
        for half in (v1, v2):
            assert not has_clique(induced_subgraph(g, half)[0], 3), seed
        assert not has_clique(g, 4), seed
        assert pair_density(g, v1, v2) >= Fraction(1, 2) - params.zeta, seed


def test_blow_up_identities():
    cases = [(complete(8), 3), (two_cliques(12), 3), (hs_extremal(12, 4), 4)]
    cases += [(gnp(14, "4/5", seed), r) for seed in range(4) for r in (3, 4)]
    for g, r in cases:
        t = augment_to_target(g, r, AugmentParams(r=r))
        blown, flat = flatten_in_blowup(g, t, r)
        assert flat.covered_count == r * t.covered_count
        assert flat.is_valid(blown.graph, pure=True)
        ft = tiling_to_fractional(g, flat, r, blown.cluster_of)
        assert ft.total_weight == Fraction(flat.covered_count, r * g.n) * g.n
        assert ft.is_valid(g)


@pytest.mark.slow
def test_absorbers_on_dense_random_graph():
    g = gnp(120, "9/10", 2024)
    p = AbsorberParams(r=4)
    rng = random.Random(7)
    built = 0
    for _ in range(5):
        s = rng.sample(range(g.n), 4)
        absorber = build_s_absorber(g, s, p)
        if absorber is None:
            continue
        built += 1
        assert absorber.without_s.is_valid(g, pure=True)
        assert absorber.with_s.is_valid(g, pure=True)
        assert is_s_t_absorber(g, s, absorber.body, p, (absorber.without_s, absorber.with_s))
    assert built > 0


@pytest.mark.slow
def test_absorbing_set_is_certified():
    g = gnp(40, "19/20", 2024)
    p = AbsorberParams(r=4, t=2, phi="1/2", xi="1/10")
    absorbing = build_absorbing_set(g, p, seed=0)
    assert len(absorbing.absorbers) == 2
    assert len(absorbing.vertices) == 16
    assert absorbing.certified is True
    assert is_xi_absorbing(g, absorbing.vertices, p)
    for absorber in absorbing.absorbers:
        assert is_s_t_absorber(g, absorber.s_set, absorber.body, p)


@pytest.mark.slow
def test_pipeline_end_to_end():
    g = gnp(48, "9/10", 2024)
    result = full_pipeline(g, AbsorberParams(r=4, t=2, phi="1/5"), AugmentParams(r=4), seed=0)
    assert result.perfect and result.stage == "factor"
    assert result.tiling.is_spanning(g)
    assert len(result.tiling) == 12

    stuck = full_pipeline(hs_extremal(8, 4), AbsorberParams(r=4), AugmentParams(r=4), seed=0)
    assert not stuck.perfect
    assert find_kr_factor(hs_extremal(8, 4), 4) is None
