"""Overlapping cycles, Hamilton-cycle search, and pattern analysis.

An overlap-`overlap` cycle on n vertices lays r consecutive vertices into
each edge and advances by r - overlap positions, so consecutive edges
share `overlap` vertices (overlap 1 is loose, r - 1 tight).  The Hamilton
searcher backtracks over cyclic vertex orderings and counts distinct
spanning edge sets, so each unlabelled cycle is counted once no matter how
many orderings realize it.

analyze_pattern computes the quantities the property testers key off:
diameter, per-edge distance layers, whether the outermost layer of every
edge spans no edge, the vertex-overlap index (the least s such that two
copies of the pattern sharing s vertices must share an edge), and the
density ratio (v - r)/(e - 1) behind the extremal lower-bound exponent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    DivisibilityError,
    Hypergraph,
    HypergraphError,
    TooLargeError,
)
from . import census

__all__ = [
    "DisconnectedPatternError",
    "PatternAnalysis",
    "ExtremalResult",
    "overlap_cycle_pattern",
    "has_hamilton",
    "count_hamilton",
    "expected_hamilton",
    "lattice_pattern",
    "analyze_pattern",
    "extremal_number_exact",
]


class DisconnectedPatternError(HypergraphError):
    """Pattern analysis needs a connected pattern."""


def overlap_cycle_pattern(n: int, r: int, overlap: int) -> Hypergraph:
    """The canonical overlap cycle on vertices 0..n-1: edge j covers the r
    consecutive vertices starting at j*(r-overlap), wrapping around."""
    if not 1 <= overlap < r:
        raise HypergraphError(f"need 1 <= overlap < r, got overlap={overlap}, r={r}")
    if n < r:
        raise HypergraphError(f"need n >= r, got n={n}, r={r}")
    step = r - overlap
    if n % step != 0:
        raise DivisibilityError(f"r-overlap={step} does not divide n={n}")
    edges = [
        tuple(sorted((j * step + t) % n for t in range(r)))
        for j in range(n // step)
    ]
    return Hypergraph(n, r, edges)


# ----------------------------------------------------------------------
# Hamilton cycles


def _hamilton_search(g: Hypergraph, overlap: int, node_budget: int, first_only: bool):
    """Distinct spanning overlap-cycle edge sets in g.

    Positions 0..n-1 around the cycle are filled in order; vertex 0 is
    confined to the first r-overlap positions, which hits every edge set
    at least once (rotations by the step size fix the block structure) and
    duplicates are removed by the final edge-set dedup.
    """
    n, r = g.n, g.r
    if not 1 <= overlap < r:
        raise HypergraphError(f"need 1 <= overlap < r, got overlap={overlap}, r={r}")
    step = r - overlap
    if n % step != 0:
        raise DivisibilityError(f"r-overlap={step} does not divide n={n}")
    blocks = n // step
    if len(g) < blocks:
        return set()
    block_positions = [
        [(j * step + t) % n for t in range(r)] for j in range(blocks)
    ]
    touching = [[] for _ in range(n)]
    for j, ps in enumerate(block_positions):
        for p in ps:
            touching[p].append(j)
    edge_set = g.edge_set()
    assignment = [-1] * n
    used = [False] * n
    found: set[frozenset] = set()
    nodes = 0

    def block_ok(j: int) -> bool:
        placed = [assignment[p] for p in block_positions[j] if assignment[p] >= 0]
        if len(placed) == r:
            return tuple(sorted(placed)) in edge_set
        if len(placed) >= 2:
            anchor = set(placed)
            return any(
                anchor.issubset(g.edges[idx]) for idx in g.incidence[placed[0]]
            )
        return True

    def place(p: int) -> bool:
        nonlocal nodes
        if p == n:
            found.add(
                frozenset(
                    tuple(sorted(assignment[q] for q in block_positions[j]))
                    for j in range(blocks)
                )
            )
            return first_only
        if p == step and not used[0]:
            return False
        nodes += 1
        if nodes > node_budget:
            raise TooLargeError(f"hamilton search exceeded {node_budget} nodes")
        for v in range(n):
            if used[v]:
                continue
            assignment[p] = v
            used[v] = True
            if all(block_ok(j) for j in touching[p]):
                if place(p + 1):
                    assignment[p] = -1
                    used[v] = False
                    return True
            assignment[p] = -1
            used[v] = False
        return False

    place(0)
    return found


def has_hamilton(g: Hypergraph, overlap: int, node_budget: int = 10**7) -> bool:
    """Does g contain a spanning overlap cycle?"""
    return bool(_hamilton_search(g, overlap, node_budget, first_only=True))


def count_hamilton(g: Hypergraph, overlap: int, node_budget: int = 10**7) -> int:
    """Number of distinct spanning overlap cycles (as unlabelled subgraphs,
    i.e. distinct edge sets)."""
    return len(_hamilton_search(g, overlap, node_budget, first_only=False))


def expected_hamilton(n: int, r: int, overlap: int, d: int) -> float:
    """Leading-term prediction n! * p^(n/(r-overlap)) with p = d/C(n-1, r-1)
    for the number of spanning overlap cycles in the uniform regular model.

    The finite-n relation between this ordered-count formula and the
    unlabelled count from count_hamilton is reported by callers, not
    asserted here.
    """
    if not 1 <= overlap < r:
        raise HypergraphError(f"need 1 <= overlap < r, got overlap={overlap}, r={r}")
    step = r - overlap
    if n % step != 0:
        raise DivisibilityError(f"r-overlap={step} does not divide n={n}")
    p = d / math.comb(n - 1, r - 1)
    return math.factorial(n) * p ** (n // step)


def lattice_pattern(k: int) -> Hypergraph:
    """The k-by-k square grid graph: 2k(k-1) edges, r=2."""
    if k < 2:
        raise HypergraphError(f"need k >= 2, got {k}")
    edges = []
    for i in range(k):
        for j in range(k):
            v = i * k + j
            if j + 1 < k:
                edges.append((v, v + 1))
            if i + 1 < k:
                edges.append((v, v + k))
    return Hypergraph(k * k, 2, edges)


# ----------------------------------------------------------------------
# pattern analysis


@dataclass
class PatternAnalysis:
    vertex_count: int
    edge_count: int
    diameter: int
    # per edge: tuple of frozensets, index = distance from the edge
    layers: dict
    outer_layer_edge_free: bool
    overlap_index: int
    # two copies on a merged vertex set sharing overlap_index - 1 vertices
    # and no edge; proof that the index cannot be smaller
    overlap_witness: tuple
    density_ratio: Fraction | None


def _graph_of(pattern) -> Hypergraph:
    return pattern.graph if isinstance(pattern, census.Pattern) else pattern


def _edge_layers(g: Hypergraph, edge: tuple, depth: int) -> tuple:
    dist = {v: 0 for v in edge}
    frontier = list(edge)
    layers = [frozenset(edge)]
    while frontier:
        nxt = []
        for u in frontier:
            for idx in g.incidence[u]:
                for w in g.edges[idx]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
        if nxt:
            layers.append(frozenset(nxt))
        frontier = nxt
    while len(layers) < depth + 1:
        layers.append(frozenset())
    return tuple(layers)


def _max_edge_disjoint_overlap(g: Hypergraph, cap: int) -> tuple[int, tuple]:
    """Largest k such that two copies of g can share k vertices and no
    edge, with the witnessing pair of edge sets on a merged universe.

    The second copy is an injective image of g; only the vertices mapped
    back into V(g) matter, the rest get fresh labels v, v+1, ...
    """
    v = g.n
    if v > cap:
        raise TooLargeError(f"overlap search supports at most {cap} vertices")
    base_edges = g.edge_set()
    best = -1
    witness = None
    vertices = range(v)
    for size in range(v + 1):
        for shared in itertools.combinations(vertices, size):
            for targets in itertools.permutations(vertices, size):
                image = dict(zip(shared, targets))
                mapped = frozenset(
                    tuple(sorted(image.get(x, v + x) for x in e)) for e in g.edges
                )
                if mapped.isdisjoint(base_edges) and size > best:
                    best = size
                    witness = (frozenset(base_edges), mapped)
    return best, witness


def analyze_pattern(pattern, overlap_cap: int = 8) -> PatternAnalysis:
    """Structural summary of a small connected pattern.

    overlap_index is found by brute force over all ways of gluing two
    copies of the pattern on a shared vertex set: it is one more than the
    largest edge-disjoint gluing.  An overlap witness realizing that
    largest gluing is returned alongside.
    """
    g = _graph_of(pattern)
    if not g.is_connected():
        raise DisconnectedPatternError("pattern analysis needs a connected pattern")
    diameter = g.diameter()
    layers = {e: _edge_layers(g, e, diameter) for e in g.edges}
    outer_free = True
    for e in g.edges:
        outer = layers[e][diameter]
        if any(set(f) <= outer for f in g.edges):
            outer_free = False
            break
    best, witness = _max_edge_disjoint_overlap(g, overlap_cap)
    v, e_count = g.n, len(g)
    beta = Fraction(v - g.r, e_count - 1) if e_count >= 2 else None
    return PatternAnalysis(
        vertex_count=v,
        edge_count=e_count,
        diameter=diameter,
        layers=layers,
        outer_layer_edge_free=outer_free,
        overlap_index=best + 1,
        overlap_witness=witness,
        density_ratio=beta,
    )


# ----------------------------------------------------------------------
# exact extremal numbers


@dataclass
class ExtremalResult:
    value: int
    witness: Hypergraph
    # lower-bound exponent r - (v-r)/(e-1); None for single-edge patterns
    exponent: Fraction | None


def extremal_number_exact(n: int, pattern, node_budget: int = 10**7) -> ExtremalResult:
    """Maximum edge count of a pattern-free r-graph on n vertices, by
    branch and bound over candidate edges in lexicographic order; an edge
    is added only when it does not complete a copy of the pattern."""
    pattern = pattern if isinstance(pattern, census.Pattern) else census.Pattern(pattern)
    r = pattern.r
    if n < r:
        raise HypergraphError(f"need n >= pattern arity, got n={n}, r={r}")
    candidates = list(itertools.combinations(range(n), r))
    best_edges: list = []
    nodes = 0

    def recurse(idx: int, current: list) -> None:
        nonlocal best_edges, nodes
        nodes += 1
        if nodes > node_budget:
            raise TooLargeError(f"extremal search exceeded {node_budget} nodes")
        if len(current) > len(best_edges):
            best_edges = list(current)
        if idx == len(candidates):
            return
        if len(current) + (len(candidates) - idx) <= len(best_edges):
            return
        e = candidates[idx]
        if not census.completes_copy(Hypergraph(n, r, current), e, pattern):
            current.append(e)
            recurse(idx + 1, current)
            current.pop()
        recurse(idx + 1, current)

    recurse(0, [])
    analysis_beta = (
        Fraction(pattern.vertex_count - r, pattern.edge_count - 1)
        if pattern.edge_count >= 2
        else None
    )
    return ExtremalResult(
        value=len(best_edges),
        witness=Hypergraph(n, r, best_edges),
        exponent=(r - analysis_beta) if analysis_beta is not None else None,
    )
