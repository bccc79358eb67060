import math

import pytest

from hyperreg.core import Hypergraph
from hyperreg.sampling import sample_regular, SamplerConfig, seeded_rng
from hyperreg.switching import (
    AddAlreadyPresentError,
    AnchoredInConfig,
    AnchoredOutConfig,
    ConfigError,
    DisjointInConfig,
    DisjointOutConfig,
    RemoveNotPresentError,
    TargetMismatchError,
    apply_switch,
    is_related_anchored,
    is_related_disjoint,
    random_switch_move,
    related_in_configs,
    related_in_configs_anchored,
    related_out_configs,
    related_out_configs_anchored,
    switching_double_count,
)


def random_disjoint_out(r, rng, n=30):
    verts = rng.sample(range(n), r * r)
    return DisjointOutConfig(
        [tuple(verts[i * r : (i + 1) * r]) for i in range(r)]
    )


def test_out_config_validation():
    with pytest.raises(ConfigError):
        DisjointOutConfig([(0, 1), (1, 2)])  # not disjoint
    with pytest.raises(ConfigError):
        DisjointOutConfig([(0, 1)])  # needs r edges
    with pytest.raises(ConfigError):
        DisjointOutConfig([(0, 1), (2, 3), (4, 5)])


def test_in_config_validation():
    # f_i must meet the target exactly in its i-th vertex
    DisjointInConfig((0, 1), [(0, 2), (1, 3)])
    with pytest.raises(ConfigError):
        DisjointInConfig((0, 1), [(1, 2), (0, 3)])  # wrong slots
    with pytest.raises(ConfigError):
        DisjointInConfig((0, 1), [(0, 2), (1, 2)])  # overlapping


def test_related_counts_match_closed_forms():
    for r in (2, 3, 4):
        rng = seeded_rng("counts", r)
        out = random_disjoint_out(r, rng)
        ins = related_in_configs(out)
        assert len(ins) == math.factorial(r) ** (r - 1)
        assert all(is_related_disjoint(out, inc) for inc in ins)
        assert len(set(ins)) == len(ins)
        outs = related_out_configs(ins[0])
        assert len(outs) == math.factorial(r - 1) ** r
        assert all(is_related_disjoint(o, ins[0]) for o in outs)
        assert out in outs


def test_relatedness_is_symmetric_membership():
    rng = seeded_rng("sym")
    out = random_disjoint_out(3, rng)
    for inc in related_in_configs(out):
        assert out in related_out_configs(inc)


def test_target_mismatch_raises():
    out = DisjointOutConfig([(0, 1), (2, 3)])
    inc = DisjointInConfig((0, 4), [(0, 5), (4, 6)])
    with pytest.raises(TargetMismatchError):
        is_related_disjoint(out, inc)


def test_apply_switch_guards():
    g = Hypergraph(6, 2, [(0, 1), (2, 3)])
    with pytest.raises(RemoveNotPresentError):
        apply_switch(g, [(4, 5)], [(0, 2)])
    with pytest.raises(AddAlreadyPresentError):
        apply_switch(g, [(0, 1)], [(2, 3)])
    # re-adding a removed edge is allowed
    assert apply_switch(g, [(0, 1)], [(0, 1)]) == g


def test_switch_preserves_degrees_and_inverts():
    rng = seeded_rng("involution")
    for r in (2, 3):
        g = sample_regular(3 * r * r, r, r, SamplerConfig(seed=7), rng)
        for _ in range(50):
            moved = random_switch_move(g, rng)
            if moved is None:
                continue
            assert moved.degrees() == g.degrees()
            removed = [e for e in g.edges if e not in moved]
            added = [e for e in moved.edges if e not in g]
            assert len(removed) == len(added) == r
            assert apply_switch(moved, added, removed) == g


def test_anchored_out_counts_exact():
    # every assignment of closing-edge vertices to slots is a valid partner
    inc = AnchoredInConfig(
        (0, 1, 2), [(0, 3, 4), (1, 5, 6), (2, 7, 8)], (9, 10, 11)
    )
    outs = related_out_configs_anchored(inc)
    assert len(outs) == math.factorial(3)
    assert all(is_related_anchored(o, inc) for o in outs)


def test_anchored_in_counts_bounded():
    out = AnchoredOutConfig((0, 1, 2), [(3, 4, 5), (6, 7, 8), (9, 10, 11)])
    ins = related_in_configs_anchored(out)
    assert 0 < len(ins) <= 3**3
    assert all(is_related_anchored(out, inc) for inc in ins)
    # fully private witnesses: every pick is valid, so exactly r^r here
    assert len(ins) == 27


def test_anchored_in_collisions_filtered():
    # shared vertices between companion edges shrink the witness pool
    out = AnchoredOutConfig((0, 1), [(2, 3), (3, 4)])
    ins = related_in_configs_anchored(out)
    assert all(is_related_anchored(out, inc) for inc in ins)
    assert len(ins) < 4


def test_anchored_closing_edge_collects_witnesses():
    out = AnchoredOutConfig((0, 4, 8), [(3, 5, 9), (1, 2, 6), (7, 10, 11)])
    material = {v for e in out.edges for v in e}
    ins = related_in_configs_anchored(out)
    assert ins
    for inc in ins:
        assert set(inc.closing) <= material
        # each inserted edge keeps r-1 vertices of its companion
        for i, f in enumerate(inc.edges):
            assert out.target[i] in f
            assert len(set(f) & set(out.edges[i])) == 2


def test_double_count_agrees_tiny():
    s_in, s_out = switching_double_count(6, 2, 2, [], [], (0, 1))
    assert s_in == s_out > 0


def test_double_count_conditioned():
    s_in, s_out = switching_double_count(6, 2, 2, [(2, 3)], [(4, 5)], (0, 1))
    assert s_in == s_out


def test_random_switch_move_none_on_tiny():
    # fewer than r edges: no move possible
    g = Hypergraph(4, 2, [(0, 1)])
    assert random_switch_move(g, seeded_rng("tiny")) is None
