import itertools
import math
from fractions import Fraction

import pytest

import oracles
from hyperreg.census import Pattern, complete_pattern, loose_path, triangle
from hyperreg.core import DivisibilityError, Hypergraph
from hyperreg.sampling import seeded_rng
from hyperreg.spanning import (
    DisconnectedPatternError,
    analyze_pattern,
    count_hamilton,
    expected_hamilton,
    extremal_number_exact,
    has_hamilton,
    lattice_pattern,
    overlap_cycle_pattern,
)


def complete_graph(n, r=2):
    return Hypergraph(n, r, list(itertools.combinations(range(n), r)))


def test_overlap_cycle_shapes():
    c4 = overlap_cycle_pattern(4, 2, 1)
    assert sorted(c4.edges) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    tight = overlap_cycle_pattern(5, 3, 2)
    assert len(tight) == 5
    assert all(len(e) == 3 for e in tight.edges)
    loose = overlap_cycle_pattern(6, 3, 1)
    assert len(loose) == 3
    # connector vertices sit in two edges, middles in one
    assert sorted(loose.degrees()) == [1, 1, 1, 2, 2, 2]


def test_overlap_cycle_validation():
    with pytest.raises(DivisibilityError):
        overlap_cycle_pattern(5, 3, 1)  # (r - overlap) must divide n
    with pytest.raises(Exception):
        overlap_cycle_pattern(4, 3, 3)
    with pytest.raises(Exception):
        overlap_cycle_pattern(4, 3, 0)


def test_count_hamilton_complete_graphs():
    for n in (4, 5, 6):
        assert count_hamilton(complete_graph(n), 1) == math.factorial(n - 1) // 2


def test_count_hamilton_matches_permutation_oracle():
    rng = seeded_rng("ham-oracle")
    for trial in range(40):
        n = rng.randint(4, 6)
        g = oracles.random_hypergraph(n, 2, rng, density=rng.uniform(0.3, 0.8))
        assert count_hamilton(g, 1) == len(oracles.hamilton_edge_sets(g, 1)), g.edges
    # a 3-uniform case: tight cycles in small random 3-graphs
    for trial in range(15):
        g = oracles.random_hypergraph(6, 3, rng, density=rng.uniform(0.3, 0.6))
        assert count_hamilton(g, 2) == len(oracles.hamilton_edge_sets(g, 2)), g.edges


def test_count_hamilton_loose_in_complete_3graph():
    g = complete_graph(6, 3)
    assert count_hamilton(g, 1) == len(oracles.hamilton_edge_sets(g, 1))


def test_has_hamilton_cycle_graph():
    c6 = overlap_cycle_pattern(6, 2, 1)
    assert has_hamilton(c6, 1)
    # remove one edge: a path has no spanning cycle
    path = Hypergraph(6, 2, [e for e in c6.edges if e != (0, 5)])
    assert not has_hamilton(path, 1)


def test_expected_hamilton_monotone_in_d():
    values = [expected_hamilton(12, 3, 2, d) for d in range(2, 8)]
    assert all(values[i] < values[i + 1] for i in range(len(values) - 1))
    assert expected_hamilton(6, 2, 1, 2) == pytest.approx(
        math.factorial(6) * (2 / 5) ** 6
    )


def test_analyze_triangle():
    a = analyze_pattern(triangle())
    assert a.vertex_count == 3 and a.edge_count == 3
    assert a.diameter == 1
    assert a.outer_layer_edge_free  # outer layer of each edge: one vertex
    assert a.overlap_index == 2
    assert a.density_ratio == Fraction(1, 2)


def test_analyze_complete_graphs():
    assert analyze_pattern(complete_pattern(4)).overlap_index == 2
    assert analyze_pattern(complete_pattern(4, 3)).overlap_index == 3


def test_analyze_c4():
    a = analyze_pattern(Pattern(overlap_cycle_pattern(4, 2, 1), name="c4"))
    assert a.overlap_index == 3
    assert a.diameter == 2
    assert a.density_ratio == Fraction(2, 3)


def test_analyze_overlap_witness_is_valid():
    a = analyze_pattern(triangle())
    base, mapped = a.overlap_witness
    # witness copies share vertices but no edges
    assert not (set(base) & set(mapped))


def test_outer_layer_membership():
    # tight 5-cycle and loose 6-cycle keep their outer layers edge-free
    tight = Pattern(overlap_cycle_pattern(5, 3, 2), name="tight5")
    loose = Pattern(overlap_cycle_pattern(6, 3, 1), name="loose6")
    assert analyze_pattern(tight).outer_layer_edge_free
    assert analyze_pattern(loose).outer_layer_edge_free
    # two triangles joined by a bridge: from a far-side edge, the layer at
    # full diameter is the opposite triangle's remote edge
    bridged = Hypergraph(
        6, 2, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
    )
    assert not analyze_pattern(Pattern(bridged)).outer_layer_edge_free


def test_analyze_rejects_disconnected():
    g = Hypergraph(4, 2, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedPatternError):
        analyze_pattern(Pattern(g))


def test_overlap_index_range_on_randoms():
    rng = seeded_rng("overlap-range")
    for trial in range(25):
        n = rng.randint(3, 5)
        g = oracles.random_hypergraph(n, 2, rng, density=0.7)
        if not g.is_connected() or not len(g):
            continue
        a = analyze_pattern(Pattern(g))
        assert 2 <= a.overlap_index <= a.vertex_count + 1


def test_lattice_pattern():
    g = lattice_pattern(3)
    assert g.n == 9
    assert len(g) == 12  # 2 * k * (k-1)
    assert g.diameter() == 4


def test_extremal_number_triangle():
    result = extremal_number_exact(5, triangle())
    assert result.value == 6
    assert result.value == oracles.brute_extremal(5, triangle().graph)
    witness = result.witness
    assert len(witness) == 6
    from hyperreg.census import count_copies

    assert count_copies(witness, triangle()) == 0


def test_extremal_number_exponent():
    result = extremal_number_exact(5, triangle())
    assert result.exponent == Fraction(3, 2)
