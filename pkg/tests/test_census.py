import itertools
import math
import statistics
from fractions import Fraction

import pytest

import oracles
from hyperreg.census import (
    ConflictGraph,
    Pattern,
    automorphism_count,
    complete_pattern,
    completes_copy,
    conflict_graph,
    count_copies,
    exact_packing,
    expected_copies,
    farness,
    find_copy,
    greedy_packing,
    loose_path,
    matching_pattern,
    min_deletion_distance,
    min_expected_copies,
    single_edge,
    triangle,
    turan_bound,
)
from hyperreg.core import Hypergraph, TooLargeError
from hyperreg.sampling import (
    SamplerConfig,
    enumerate_regular,
    sample_mcmc_stream,
    seeded_rng,
)
from hyperreg.spanning import overlap_cycle_pattern


def k4():
    return Hypergraph(4, 2, list(itertools.combinations(range(4), 2)))


def c4():
    return Pattern(overlap_cycle_pattern(4, 2, 1), name="c4")


def test_automorphism_counts():
    assert automorphism_count(triangle().graph) == 6
    assert automorphism_count(k4()) == 24
    assert automorphism_count(c4().graph) == 8
    # loose path of two 3-edges: swap the path ends, swap leaves inside each
    assert automorphism_count(loose_path(2, 3).graph) == 8
    assert automorphism_count(single_edge(3).graph) == 6


def test_automorphisms_match_brute_force():
    rng = seeded_rng("aut-oracle")
    for trial in range(60):
        r = rng.choice([2, 3])
        n = rng.randint(r, 6)
        g = oracles.random_hypergraph(n, r, rng, density=rng.uniform(0.1, 0.6))
        assert automorphism_count(g) == oracles.brute_automorphisms(g), g.edges


def test_count_copies_known_values():
    assert count_copies(k4(), triangle()) == 4
    assert count_copies(k4(), c4()) == 3
    assert count_copies(k4(), single_edge()) == 6
    assert count_copies(k4(), complete_pattern(4)) == 1
    # no triangles in a 4-cycle
    assert count_copies(c4().graph, triangle()) == 0


def test_count_copies_matches_injection_oracle():
    rng = seeded_rng("copies-oracle")
    patterns2 = [triangle(), c4(), complete_pattern(4), matching_pattern(2)]
    patterns3 = [single_edge(3), loose_path(2, 3)]
    for trial in range(120):
        r = rng.choice([2, 3])
        n = rng.randint(max(r, 3), 8)
        g = oracles.random_hypergraph(n, r, rng, density=rng.uniform(0.1, 0.6))
        pattern = rng.choice(patterns2 if r == 2 else patterns3)
        expected = len(oracles.copies_by_injection(g, pattern.graph))
        assert count_copies(g, pattern) == expected, (g.edges, pattern.name)


def test_find_copy_and_completes_copy():
    g = k4()
    copy = find_copy(g, triangle())
    assert copy is not None and len(copy) == 3
    assert find_copy(c4().graph, triangle()) is None
    # adding any chord to C_4 closes a triangle
    assert completes_copy(c4().graph, (0, 2), triangle())
    assert not completes_copy(c4().graph, (0, 1), triangle())


def test_expected_copies_exact_single_edge_is_edge_count():
    # single-edge pattern: expectation equals the number of edges, exactly
    assert expected_copies(6, 2, 2, single_edge(), exact=True) == Fraction(6)
    assert expected_copies(6, 3, 2, single_edge(3), exact=True) == Fraction(4)


def test_expected_copies_float_route():
    exact = expected_copies(30, 2, 6, triangle(), exact=True)
    loose = expected_copies(30, 2, 6, triangle(), exact=False)
    # float route uses the asymptotic p, so only rough agreement is owed
    assert loose == pytest.approx(float(exact), rel=0.5)


def test_min_expected_copies_triangle_is_triangle_term():
    # at (6,2,2): p = 2/5, so E[edges] = 6, E[paths] = 48/5, and the
    # binding term is E[triangles] = 20 * (2/5)^3 = 32/25
    value, witness = min_expected_copies(6, 2, 2, triangle())
    assert value == Fraction(32, 25)
    assert witness.edge_count == 3
    # stripping isolated vertices is the default; keeping them only shrinks
    # the minimum further (the edge-subset patterns gain free vertices)
    kept, _ = min_expected_copies(6, 2, 2, triangle(), strip_isolated=False)
    assert kept <= value


def test_conflict_graph_on_k4_triangles():
    cg = conflict_graph(k4(), triangle())
    assert cg.node_count == 4
    # every pair of K_4 triangles shares an edge
    assert cg.edge_count == 6


def test_turan_bound_values():
    assert turan_bound(0, 0) == 0
    assert turan_bound(4, 6) == 1
    assert turan_bound(10, 0) == 10
    # ceil(25 / (8 + 5)) = 2
    assert turan_bound(5, 4) == 2


def test_greedy_packing_beats_turan_on_randoms():
    rng = seeded_rng("greedy-turan")
    for trial in range(80):
        r = rng.choice([2, 3])
        n = rng.randint(max(r, 4), 8)
        g = oracles.random_hypergraph(n, r, rng, density=rng.uniform(0.2, 0.6))
        pattern = triangle() if r == 2 else single_edge(3)
        cg = conflict_graph(g, pattern)
        chosen = greedy_packing(g, pattern, conflict=cg)
        assert len(chosen) >= turan_bound(cg.node_count, cg.edge_count)
        # chosen copies really are pairwise edge-disjoint
        union = set()
        for copy in chosen:
            assert not (union & copy)
            union |= copy


def test_exact_packing_matches_brute_force():
    rng = seeded_rng("packing-oracle")
    checked = 0
    for trial in range(200):
        r = rng.choice([2, 3])
        n = rng.randint(max(r, 4), 7)
        g = oracles.random_hypergraph(n, r, rng, density=rng.uniform(0.15, 0.5))
        pattern = triangle() if r == 2 else loose_path(2, 3)
        copies = oracles.copies_by_injection(g, pattern.graph)
        if len(copies) > 15:
            continue
        assert exact_packing(g, pattern) == oracles.brute_max_packing(copies)
        checked += 1
    assert checked > 50


def test_exact_packing_cap():
    big = Hypergraph(9, 2, list(itertools.combinations(range(9), 2)))
    with pytest.raises(TooLargeError):
        exact_packing(big, triangle(), cap=10)


def test_min_deletion_k4_triangle():
    assert min_deletion_distance(k4(), triangle()) == 2


def test_min_deletion_matches_brute_force():
    rng = seeded_rng("deletion-oracle")
    for trial in range(60):
        n = rng.randint(4, 7)
        g = oracles.random_hypergraph(n, 2, rng, density=rng.uniform(0.2, 0.55))
        if count_copies(g, triangle(), limit=20) > 18:
            continue
        assert min_deletion_distance(g, triangle()) == oracles.brute_min_deletion(
            g, triangle().graph
        ), g.edges


def test_min_deletion_at_least_packing():
    rng = seeded_rng("del-vs-pack")
    for trial in range(60):
        n = rng.randint(4, 7)
        g = oracles.random_hypergraph(n, 2, rng, density=rng.uniform(0.2, 0.5))
        try:
            packing = exact_packing(g, triangle())
            deletion = min_deletion_distance(g, triangle())
        except TooLargeError:
            continue
        assert deletion >= packing


def test_farness_exact_ratio():
    eps, is_exact = farness(k4(), triangle())
    assert is_exact
    assert eps == Fraction(2, 6)
    g = c4().graph
    assert farness(g, triangle()) == (Fraction(0), True)


def test_farness_fallback_is_lower_bound():
    # far above the cap: the greedy-packing fallback still lower-bounds
    big = Hypergraph(10, 2, list(itertools.combinations(range(10), 2)))
    eps, is_exact = farness(big, triangle(), cap=5)
    assert not is_exact
    assert eps > 0
    true_deletion = min_deletion_distance(big, triangle(), cap=200)
    assert eps <= Fraction(true_deletion, len(big))


def test_pattern_factories_shapes():
    assert triangle().graph.degrees() == [2, 2, 2]
    assert complete_pattern(5).edge_count == 10
    lp = loose_path(3, 3)
    assert lp.vertex_count == 7 and lp.edge_count == 3
    m = matching_pattern(3)
    assert m.vertex_count == 6 and m.edge_count == 3
    assert m.has_isolated_vertex is False


def test_expected_copies_tracks_enumeration_mean():
    # independence-heuristic expectation vs the exact mean over the full
    # (6,2,2) enumeration, for patterns where degree constraints do not
    # dominate; band: within the exact mean itself
    classes = enumerate_regular(6, 2, 2)
    for pattern in (single_edge(), matching_pattern(2)):
        mean = Fraction(
            sum(count_copies(g, pattern) for g in classes), len(classes)
        )
        formula = expected_copies(6, 2, 2, pattern, exact=True)
        assert abs(formula - mean) <= mean, pattern.name


def test_packing_respects_copy_and_edge_budgets():
    rng = seeded_rng("census-budgets")
    checked = 0
    for _ in range(80):
        n = rng.randint(4, 7)
        g = oracles.random_hypergraph(n, 2, rng, density=rng.uniform(0.2, 0.5))
        copies = count_copies(g, triangle())
        try:
            packing = exact_packing(g, triangle())
        except TooLargeError:
            continue
        assert packing <= copies
        assert packing * triangle().edge_count <= len(g)
        checked += 1
    assert checked > 40


def test_triangle_mean_concentrates_on_samples():
    # 30 mcmc draws at (30,2,6): the sampled mean must sit inside a coarse
    # 5-standard-deviation band around the heuristic expectation (which
    # overshoots at this scale, so the band is the whole point)
    mu = float(expected_copies(30, 2, 6, triangle(), exact=True))
    config = SamplerConfig(method="mcmc", thin=30)
    draws = [
        count_copies(g, triangle())
        for g in sample_mcmc_stream(
            30, 2, 6, 30, config, seeded_rng("census-concentration")
        )
    ]
    mean = statistics.mean(draws)
    spread = statistics.stdev(draws)
    assert abs(mean - mu) <= 5 * spread
