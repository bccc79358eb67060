"""Degree-preserving edge switchings between r-uniform hypergraphs.

A switching removes an ordered tuple of edges (an out-configuration rooted
at a target edge e) and inserts a related ordered tuple of non-edges (an
in-configuration), leaving every vertex degree unchanged.  Two config
flavours are implemented:

* Disjoint configs: the removed edges are pairwise disjoint and the
  inserted edges form transversals of them.  A fixed out-configuration has
  exactly (r!)**(r-1) related in-configurations, and a fixed
  in-configuration has ((r-1)!)**r related out-configurations.
* Anchored configs: the removed edges e_1..e_r avoid the matching target
  vertex and each contributes one private witness vertex; the inserted
  edges reuse the removed material plus one closing edge built from the
  witnesses.  A fixed in-configuration has exactly r! related
  out-configurations, and an out-configuration has at most r**r related
  in-configurations.

Both kinds are involutions: applying the reverse switch restores the
original edge set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    Hypergraph,
    HypergraphError,
    InfeasibleError,
    edge_key,
)

__all__ = [
    "DisjointOutConfig",
    "DisjointInConfig",
    "AnchoredOutConfig",
    "AnchoredInConfig",
    "ConfigError",
    "TargetMismatchError",
    "RemoveNotPresentError",
    "AddAlreadyPresentError",
    "is_related_disjoint",
    "related_in_configs",
    "related_out_configs",
    "is_related_anchored",
    "related_in_configs_anchored",
    "related_out_configs_anchored",
    "apply_switch",
    "random_switch_move",
    "switching_double_count",
]


class ConfigError(HypergraphError):
    """A switching configuration violates its construction invariants."""


class TargetMismatchError(ConfigError):
    """Out- and in-configurations disagree on the target edge."""


class RemoveNotPresentError(HypergraphError):
    pass


class AddAlreadyPresentError(HypergraphError):
    pass


def _as_keys(edges: Iterable[Iterable[int]], r: int | None = None) -> tuple[tuple[int, ...], ...]:
    return tuple(edge_key(e, r) for e in edges)


@dataclass(frozen=True)
class DisjointOutConfig:
    """Ordered tuple (e, e_2, ..., e_r) of pairwise disjoint r-edges.

    The first edge is the target being switched away.
    """

    edges: tuple[tuple[int, ...], ...]

    def __init__(self, edges: Iterable[Iterable[int]]):
        edges = _as_keys(edges)
        r = len(edges[0]) if edges else 0
        if r < 2 or len(edges) != r:
            raise ConfigError(f"need r edges of size r, got {len(edges)} of size {r}")
        edges = _as_keys(edges, r)
        union: set[int] = set()
        for e in edges:
            if union.intersection(e):
                raise ConfigError("edges must be pairwise disjoint")
            union.update(e)
        object.__setattr__(self, "edges", edges)

    @property
    def r(self) -> int:
        return len(self.edges)

    @property
    def target(self) -> tuple[int, ...]:
        return self.edges[0]


@dataclass(frozen=True)
class DisjointInConfig:
    """Ordered tuple (f_1, ..., f_r) of pairwise disjoint non-edges where
    f_i meets the target edge exactly in its i-th smallest vertex."""

    target: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...]

    def __init__(self, target: Iterable[int], edges: Iterable[Iterable[int]]):
        target = edge_key(target)
        r = len(target)
        edges = _as_keys(edges, r)
        if len(edges) != r:
            raise ConfigError(f"need {r} edges, got {len(edges)}")
        union: set[int] = set()
        for i, f in enumerate(edges):
            if set(f) & set(target) != {target[i]}:
                raise ConfigError(
                    f"edge {f} must meet the target {target} exactly in {target[i]}"
                )
            if union.intersection(f):
                raise ConfigError("edges must be pairwise disjoint")
            union.update(f)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "edges", edges)

    @property
    def r(self) -> int:
        return len(self.edges)


def is_related_disjoint(out: DisjointOutConfig, inc: DisjointInConfig) -> bool:
    """Whether every removed edge meets every inserted edge exactly once."""
    if out.target != inc.target:
        raise TargetMismatchError(f"targets differ: {out.target} vs {inc.target}")
    return all(
        len(set(e) & set(f)) == 1 for e in out.edges for f in inc.edges
    )


def related_in_configs(out: DisjointOutConfig) -> list[DisjointInConfig]:
    """All in-configurations related to `out`.

    Each inserted edge must pick exactly one vertex from every removed edge,
    with the target's contribution pinned; the free choices are one
    permutation per non-target removed edge, giving (r!)**(r-1) results.
    """
    r = out.r
    target = out.target
    others = out.edges[1:]
    configs = []
    for perms in itertools.product(itertools.permutations(range(r)), repeat=r - 1):
        edges = []
        for i in range(r):
            verts = [target[i]]
            verts.extend(others[j][perms[j][i]] for j in range(r - 1))
            edges.append(verts)
        configs.append(DisjointInConfig(target, edges))
    return configs


def related_out_configs(inc: DisjointInConfig) -> list[DisjointOutConfig]:
    """All out-configurations related to `inc`.

    The target edge is forced; every other removed edge picks one non-target
    vertex from each inserted edge, one permutation per inserted edge, for
    ((r-1)!)**r results.
    """
    r = inc.r
    target = inc.target
    # non-target vertices of each inserted edge, in ascending order
    spare = [tuple(v for v in f if v != target[i]) for i, f in enumerate(inc.edges)]
    configs = []
    for perms in itertools.product(itertools.permutations(range(r - 1)), repeat=r):
        edges = [target]
        for i in range(r - 1):
            edges.append([spare[j][perms[j][i]] for j in range(r)])
        configs.append(DisjointOutConfig(edges))
    return configs


@dataclass(frozen=True)
class AnchoredOutConfig:
    """Ordered tuple (e, e_1, ..., e_r) of edges where e_i avoids the i-th
    target vertex and owns a private witness vertex outside the target and
    all other e_j."""

    target: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...]

    def __init__(self, target: Iterable[int], edges: Iterable[Iterable[int]]):
        target = edge_key(target)
        r = len(target)
        edges = _as_keys(edges, r)
        if len(edges) != r:
            raise ConfigError(f"need {r} companion edges, got {len(edges)}")
        for i, e in enumerate(edges):
            if target[i] in e:
                raise ConfigError(f"edge {e} must avoid target vertex {target[i]}")
            if not self._witnesses(target, edges, i):
                raise ConfigError(f"edge {e} has no private witness vertex")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "edges", edges)

    @staticmethod
    def _witnesses(target, edges, i) -> set[int]:
        private = set(edges[i]) - set(target)
        for j, other in enumerate(edges):
            if j != i:
                private -= set(other)
        return private

    @property
    def r(self) -> int:
        return len(self.target)

    def witness_choices(self, i: int) -> set[int]:
        """Vertices of edges[i] usable as its witness."""
        return self._witnesses(self.target, self.edges, i)


@dataclass(frozen=True)
class AnchoredInConfig:
    """Ordered tuple (f_1, ..., f_r, f): f_i contains the i-th target
    vertex, the f_i are distinct, and the closing edge f avoids them all."""

    target: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...]
    closing: tuple[int, ...]

    def __init__(self, target, edges, closing):
        target = edge_key(target)
        r = len(target)
        edges = _as_keys(edges, r)
        closing = edge_key(closing, r)
        if len(edges) != r:
            raise ConfigError(f"need {r} edges, got {len(edges)}")
        if len(set(edges)) != r:
            raise ConfigError("edges must be pairwise distinct")
        for i, f in enumerate(edges):
            if target[i] not in f:
                raise ConfigError(f"edge {f} must contain target vertex {target[i]}")
            if set(f) & set(closing):
                raise ConfigError("closing edge must avoid all other edges")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "closing", closing)

    @property
    def r(self) -> int:
        return len(self.target)


def is_related_anchored(out: AnchoredOutConfig, inc: AnchoredInConfig) -> bool:
    """Definitional relatedness check for anchored configurations.

    Requires f_i = (e_i's shared part) + i-th target vertex, with the
    closing edge collecting the one leftover vertex of each e_i.
    """
    if out.target != inc.target:
        raise TargetMismatchError(f"targets differ: {out.target} vs {inc.target}")
    leftovers = set()
    for i in range(out.r):
        shared = set(inc.edges[i]) - {inc.target[i]}
        if not shared <= set(out.edges[i]):
            return False
        rest = set(out.edges[i]) - shared
        if len(rest) != 1:
            return False
        leftovers.update(rest)
    return leftovers == set(inc.closing)


def related_in_configs_anchored(out: AnchoredOutConfig) -> list[AnchoredInConfig]:
    """All in-configurations related to an anchored out-configuration.

    One witness vertex is chosen from each removed edge, so there are at
    most r**r results; invalid choices (colliding witnesses, coinciding
    edges) are filtered out.
    """
    r = out.r
    configs = []
    for picks in itertools.product(*(range(r) for _ in range(r))):
        witnesses = [out.edges[i][picks[i]] for i in range(r)]
        if len(set(witnesses)) != r:
            continue
        edges = []
        for i in range(r):
            kept = [v for v in out.edges[i] if v != witnesses[i]]
            edges.append(kept + [out.target[i]])
        try:
            cfg = AnchoredInConfig(out.target, edges, witnesses)
        except ConfigError:
            continue
        if is_related_anchored(out, cfg):
            configs.append(cfg)
    return configs


def related_out_configs_anchored(inc: AnchoredInConfig) -> list[AnchoredOutConfig]:
    """All out-configurations related to an anchored in-configuration.

    Every assignment of the closing edge's vertices to the r slots yields a
    valid partner, so the count is exactly r!.
    """
    r = inc.r
    configs = []
    for assignment in itertools.permutations(inc.closing):
        edges = []
        for i in range(r):
            kept = [v for v in inc.edges[i] if v != inc.target[i]]
            edges.append(kept + [assignment[i]])
        configs.append(AnchoredOutConfig(inc.target, edges))
    return configs


def apply_switch(
    g: Hypergraph,
    remove: Iterable[Iterable[int]],
    add: Iterable[Iterable[int]],
) -> Hypergraph:
    """Remove one edge set and insert another, returning a new hypergraph.

    Vertex degrees are preserved whenever (remove, add) is a related
    configuration pair, and re-applying with the roles swapped restores the
    original graph exactly.
    """
    remove_keys = _as_keys(remove, g.r)
    add_keys = _as_keys(add, g.r)
    removed = set(remove_keys)
    for e in remove_keys:
        if e not in g:
            raise RemoveNotPresentError(f"edge {e} not present")
    for f in add_keys:
        if f in g and f not in removed:
            raise AddAlreadyPresentError(f"edge {f} already present")
    kept = [e for e in g.edges if e not in removed]
    kept.extend(add_keys)
    return Hypergraph(g.n, g.r, kept)


def random_switch_move(g: Hypergraph, rng: random.Random) -> Hypergraph | None:
    """One lazy switching step on a regular hypergraph.

    Draws an ordered r-tuple of distinct edges uniformly, then a uniform
    related in-configuration.  Returns None (no move) when the drawn edges
    are not pairwise disjoint or any inserted edge is already present; this
    keeps the proposal symmetric, so the walk is uniform on its reachable
    class.
    """
    r = g.r
    if len(g.edges) < r:
        return None
    picked = [g.edges[i] for i in rng.sample(range(len(g.edges)), r)]
    union: set[int] = set()
    for e in picked:
        if union.intersection(e):
            return None
        union.update(e)
    target = picked[0]
    others = picked[1:]
    perms = []
    for _ in range(r - 1):
        p = list(range(r))
        rng.shuffle(p)
        perms.append(p)
    inserted = []
    for i in range(r):
        verts = [target[i]]
        verts.extend(others[j][perms[j][i]] for j in range(r - 1))
        key = tuple(sorted(verts))
        if key in g:
            return None
        inserted.append(key)
    return apply_switch(g, picked, inserted)


# ----------------------------------------------------------------------
# exhaustive double counting over a conditioned regular class


def _class_graphs(n, r, d, forced, forbidden):
    from .sampling import enumerate_regular  # local import, sampling builds on us

    graphs = []
    for g in enumerate_regular(n, r, d):
        if all(e in g for e in forced) and not any(e in g for e in forbidden):
            graphs.append(g)
    return graphs


def _count_out_switchings(g, target, forced, forbidden):
    """Valid (out, in) pairs rooted at `target` that leave the class intact:
    removed edges stay clear of `forced`, inserted edges clear of
    `forbidden` and of the graph itself."""
    removable = [e for e in g.edges if e != target and e not in forced]
    r = g.r
    count = 0
    for rest in itertools.permutations(removable, r - 1):
        union = set(target)
        ok = True
        for e in rest:
            if union.intersection(e):
                ok = False
                break
            union.update(e)
        if not ok:
            continue
        out = DisjointOutConfig((target,) + rest)
        for inc in related_in_configs(out):
            if all(f not in g and f not in forbidden for f in inc.edges):
                count += 1
    return count


def _count_in_switchings(g, target, forced, forbidden):
    """Valid (out, in) pairs whose insertion brings `target` into g."""
    r = g.r
    count = 0
    # candidate i-th inserted edges: in g, not forced, meeting target only
    # in its i-th vertex
    candidates: list[list[tuple[int, ...]]] = []
    tset = set(target)
    for i in range(r):
        cands = [
            f
            for f in g.edges
            if f not in forced and set(f) & tset == {target[i]}
        ]
        candidates.append(cands)
    for combo in itertools.product(*candidates):
        union: set[int] = set()
        ok = True
        for f in combo:
            if union.intersection(f):
                ok = False
                break
            union.update(f)
        if not ok:
            continue
        inc = DisjointInConfig(target, combo)
        for out in related_out_configs(inc):
            if all(e not in g and e not in forbidden for e in out.edges[1:]):
                count += 1
    return count


def switching_double_count(
    n: int,
    r: int,
    d: int,
    forced: Iterable[Iterable[int]],
    forbidden: Iterable[Iterable[int]],
    target: Iterable[int],
) -> tuple[int, int]:
    """Count switchings out of graphs containing `target` and into graphs
    missing it, across the whole conditioned d-regular class.

    Both totals count the edges of the same bipartite transition multigraph,
    so they must agree exactly.  Only feasible on instances small enough to
    enumerate.
    """
    if (n * d) % r != 0:
        raise InfeasibleError(f"r={r} does not divide n*d={n * d}")
    forced = set(_as_keys(forced, r))
    forbidden = set(_as_keys(forbidden, r))
    target = edge_key(target, r)
    if target in forced or target in forbidden:
        raise HypergraphError("target edge must be unconditioned")
    if forced & forbidden:
        raise HypergraphError("forced and forbidden edge sets must be disjoint")
    graphs = _class_graphs(n, r, d, forced, forbidden)
    s_out = sum(
        _count_out_switchings(g, target, forced, forbidden)
        for g in graphs
        if target in g
    )
    s_in = sum(
        _count_in_switchings(g, target, forced, forbidden)
        for g in graphs
        if target not in g
    )
    return s_in, s_out
