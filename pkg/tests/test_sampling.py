import math
from fractions import Fraction

import pytest

from hyperreg.core import Hypergraph, InfeasibleError
from hyperreg.sampling import (
    EmptyClassError,
    SamplerConfig,
    asymptotic_params,
    enumerate_regular,
    estimate_edge_probability,
    exact_conditional_edge_probability,
    regular_seed_graph,
    sample_binomial,
    sample_conditional,
    sample_fixed_edges,
    sample_mcmc,
    sample_mcmc_stream,
    sample_pairing,
    sample_regular,
    seeded_rng,
    theoretical_edge_probability,
)


def test_seeded_rng_is_deterministic_and_keyed():
    a = seeded_rng("x", 1).random()
    b = seeded_rng("x", 1).random()
    c = seeded_rng("x", 2).random()
    assert a == b != c


def test_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(method="bogus")
    with pytest.raises(ValueError):
        SamplerConfig(burn_in=-1)


def test_enumerate_known_counts():
    # 2-regular graphs on 6 vertices: disjoint cycle covers
    assert len(enumerate_regular(6, 2, 2)) == 70
    # perfect matchings: (n-1)!! of them
    assert len(enumerate_regular(4, 2, 1)) == 3
    assert len(enumerate_regular(6, 2, 1)) == 15
    assert len(enumerate_regular(8, 2, 1)) == 105
    # K_4 is the unique 3-regular graph on 4 vertices
    assert len(enumerate_regular(4, 2, 3)) == 1


def test_enumerate_graphs_are_distinct_and_regular():
    graphs = enumerate_regular(6, 3, 2)
    assert len(set(graphs)) == len(graphs) > 0
    for g in graphs:
        assert g.is_regular(2)
        assert g.r == 3


def test_enumerate_infeasible():
    with pytest.raises(InfeasibleError):
        enumerate_regular(5, 2, 3)


def test_seed_graph_is_regular():
    for n, r, d in [(6, 2, 2), (8, 2, 3), (6, 3, 2), (12, 3, 4), (9, 3, 2), (12, 4, 2)]:
        g = regular_seed_graph(n, r, d)
        assert g.is_regular(d), (n, r, d)
        # deterministic: same graph on every call
        assert regular_seed_graph(n, r, d) == g


def test_pairing_sampler_output_is_regular():
    rng = seeded_rng("pairing-out")
    for n, r, d in [(6, 2, 2), (8, 2, 3), (6, 3, 2)]:
        for _ in range(20):
            g = sample_pairing(n, r, d, rng)
            assert g.is_regular(d)
            assert g.n == n and g.r == r


def test_mcmc_sampler_output_is_regular():
    rng = seeded_rng("mcmc-out")
    config = SamplerConfig(method="mcmc", burn_in=200)
    for n, r, d in [(6, 2, 2), (6, 3, 2)]:
        g = sample_mcmc(n, r, d, config, rng)
        assert g.is_regular(d)


def test_mcmc_zero_burnin_is_seed_graph():
    config = SamplerConfig(method="mcmc", burn_in=0)
    g = sample_regular(8, 2, 3, config, seeded_rng("nb"))
    assert g == regular_seed_graph(8, 2, 3)


def test_mcmc_stream_yields_count_and_regularity():
    config = SamplerConfig(method="mcmc", burn_in=50, thin=7)
    draws = list(sample_mcmc_stream(6, 2, 2, 25, config, seeded_rng("stream")))
    assert len(draws) == 25
    assert all(g.is_regular(2) for g in draws)
    # the thinned chain should actually move
    assert len(set(draws)) > 1


def test_sample_regular_enumerate_method():
    config = SamplerConfig(method="enumerate", seed=3)
    g = sample_regular(6, 2, 2, config, seeded_rng("en"))
    assert g.is_regular(2)


def test_conditional_respects_conditions():
    rng = seeded_rng("cond")
    forced = [(0, 1)]
    forbidden = [(2, 3)]
    for _ in range(25):
        g = sample_conditional(6, 2, 2, forced, forbidden, SamplerConfig(), rng)
        assert (0, 1) in g
        assert (2, 3) not in g
        assert g.is_regular(2)


def test_conditional_empty_class():
    # forcing a 4-cycle on 0..3 strands vertices 4 and 5: they cannot reach
    # degree 2 on their own, so the class is empty but degree-feasible
    with pytest.raises(EmptyClassError):
        sample_conditional(
            6, 2, 2,
            [(0, 1), (1, 2), (2, 3), (0, 3)], [],
            SamplerConfig(), seeded_rng("e"),
        )


def test_conditional_degree_overload_is_infeasible():
    with pytest.raises(InfeasibleError):
        sample_conditional(
            6, 2, 2, [(0, 1), (0, 2), (0, 3)], [], SamplerConfig(), seeded_rng("i")
        )


def test_conditional_overlap_rejected():
    with pytest.raises(Exception):
        sample_conditional(6, 2, 2, [(0, 1)], [(0, 1)], SamplerConfig(), seeded_rng("o"))


def test_binomial_and_fixed_edge_samplers():
    rng = seeded_rng("plumbing")
    g = sample_binomial(10, 2, 0.0, rng)
    assert len(g) == 0
    g = sample_binomial(10, 2, 1.0, rng)
    assert len(g) == math.comb(10, 2)
    for m in (0, 7, 20):
        h = sample_fixed_edges(8, 3, m, rng)
        assert len(h) == m


def test_theoretical_edge_probability_values():
    assert theoretical_edge_probability(6, 2, 2) == Fraction(6, 15)
    assert theoretical_edge_probability(8, 2, 3) == Fraction(3, 7)
    assert theoretical_edge_probability(6, 3, 2) == Fraction(4, 20)


def test_exact_conditional_matches_enumeration_ratio():
    # hand count over the 70-graph class: 14 of 28 graphs containing {0,1}
    # also contain {3,4}
    value = exact_conditional_edge_probability(6, 2, 2, (3, 4), [(0, 1)], [])
    assert value == Fraction(1, 2)
    # unconditioned case must agree with the closed form
    assert exact_conditional_edge_probability(6, 2, 2, (0, 1)) == Fraction(6, 15)


def test_estimate_edge_probability_close_on_small_case():
    est = estimate_edge_probability(
        6, 2, 2, (0, 1), trials=4000, rng=seeded_rng("est"), config=SamplerConfig()
    )
    exact = 6 / 15
    assert abs(est.estimate - exact) < 5 * est.stderr + 1e-12
    assert est.trials == 4000
    assert est.stderr > 0
    assert est.formula_value == pytest.approx(1 * 2 / 6)  # (r-1)! d / n^(r-1)


def test_asymptotic_params_fields():
    params = asymptotic_params(20, 2, 4)
    assert params.edge_probability == pytest.approx(4 / 20)
    assert params.edge_probability_exact == pytest.approx(40 / math.comb(20, 2))
    assert params.error_term == pytest.approx(1 / 20 + 1 / 4 + 4 / 20)
    # the margin swamps 1 at this scale, so the sandwich says nothing
    assert params.sandwich_margin > 1
    assert params.applicable is False
    big = asymptotic_params(1000, 2, 30)
    assert big.applicable is True
    assert 0 < big.sandwich_edge_probability < big.edge_probability
    assert big.sandwich_edge_count > 0
