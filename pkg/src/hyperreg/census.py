"""Counting small patterns inside hypergraphs.

A Pattern wraps a small hypergraph F together with its automorphism count.
The module counts copies of F in a host graph (a copy is a set of host
edges isomorphic to F; isolated pattern vertices never constrain a copy),
evaluates the expected copy count in the uniform regular model, minimises
that expectation over sub-patterns, and bounds the largest edge-disjoint
packing and the smallest edge deletion set through an explicit conflict
graph.

Exact packing and deletion routines branch over the copy list and refuse
hosts with more copies than `cap`; the greedy packing and the Turan-style
bound stay available at any size.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .core import (
    Hypergraph,
    HypergraphError,
    InfeasibleError,
    TooLargeError,
    edge_key,
    regular_class_feasible,
)

__all__ = [
    "Pattern",
    "ConflictGraph",
    "automorphism_count",
    "count_copies",
    "find_copy",
    "completes_copy",
    "expected_copies",
    "min_expected_copies",
    "conflict_graph",
    "turan_bound",
    "greedy_packing",
    "exact_packing",
    "min_deletion_distance",
    "farness",
    "single_edge",
    "triangle",
    "complete_pattern",
    "loose_path",
    "matching_pattern",
]


def automorphism_count(graph: Hypergraph) -> int:
    """Number of vertex permutations mapping the edge set onto itself.

    Backtracks vertex by vertex; candidates are restricted to equal-degree
    vertices and every fully mapped edge must land on an edge.
    """
    n = graph.n
    edges = graph.edge_set()
    degs = graph.degrees()
    image = [-1] * n
    used = [False] * n
    count = 0

    def full_edges_ok(v: int) -> bool:
        for idx in graph.incidence[v]:
            e = graph.edges[idx]
            if all(image[u] >= 0 for u in e):
                if tuple(sorted(image[u] for u in e)) not in edges:
                    return False
        return True

    def recurse(v: int) -> None:
        nonlocal count
        if v == n:
            count += 1
            return
        for w in range(n):
            if used[w] or degs[w] != degs[v]:
                continue
            image[v] = w
            used[w] = True
            if full_edges_ok(v):
                recurse(v + 1)
            used[w] = False
            image[v] = -1

    recurse(0)
    return count


class Pattern:
    """A fixed small hypergraph to search for, with cached statistics."""

    def __init__(self, graph: Hypergraph, name: str | None = None):
        self.graph = graph
        self.name = name or f"pattern-v{graph.n}-e{len(graph)}"
        self._aut: int | None = None

    @property
    def vertex_count(self) -> int:
        return self.graph.n

    @property
    def edge_count(self) -> int:
        return len(self.graph)

    @property
    def r(self) -> int:
        return self.graph.r

    @property
    def automorphisms(self) -> int:
        if self._aut is None:
            self._aut = automorphism_count(self.graph)
        return self._aut

    @property
    def has_isolated_vertex(self) -> bool:
        return any(d == 0 for d in self.graph.degrees())

    def __repr__(self):
        return f"Pattern({self.name!r}, v={self.vertex_count}, e={self.edge_count})"


def _as_pattern(pattern) -> Pattern:
    return pattern if isinstance(pattern, Pattern) else Pattern(pattern)


# ----------------------------------------------------------------------
# copy search


def _edge_order(f: Hypergraph, first: int = 0) -> list[tuple[int, ...]]:
    """Pattern edges reordered so each edge touches the already-placed
    vertices when possible; keeps the candidate lists in the host short."""
    remaining = list(f.edges)
    order = [remaining.pop(first)]
    placed = set(order[0])
    while remaining:
        best = max(
            range(len(remaining)), key=lambda i: len(placed.intersection(remaining[i]))
        )
        order.append(remaining.pop(best))
        placed.update(order[-1])
    return order


def _iter_copies(
    g: Hypergraph,
    pattern: Pattern,
    pinned: tuple[int, ...] | None = None,
    limit: int | None = None,
) -> Iterator[frozenset]:
    """Distinct copies of the pattern in g, as frozensets of host edges.

    With `pinned` set, only copies whose edge set contains that host edge
    are produced (every pattern edge is tried as the one landing on it).
    """
    f = pattern.graph
    if f.r != g.r:
        raise HypergraphError(f"pattern arity {f.r} != host arity {g.r}")
    if len(f) == 0:
        return
    roots = range(len(f)) if pinned is not None else (0,)
    seen: set[frozenset] = set()
    produced = 0
    for root in roots:
        order = _edge_order(f, root)
        image: dict[int, int] = {}
        taken: set[int] = set()
        chosen: list[tuple[int, ...]] = []

        def extend(i: int) -> Iterator[frozenset]:
            nonlocal produced
            if i == len(order):
                copy = frozenset(chosen)
                if copy not in seen:
                    seen.add(copy)
                    produced += 1
                    if limit is not None and produced > limit:
                        raise TooLargeError(f"more than {limit} copies")
                    yield copy
                return
            fe = order[i]
            mapped = [x for x in fe if x in image]
            free = [x for x in fe if x not in image]
            if i == 0 and pinned is not None:
                candidates: Iterable[tuple[int, ...]] = (pinned,)
            elif mapped:
                candidates = (
                    g.edges[j] for j in g.incidence[image[mapped[0]]]
                )
            else:
                candidates = g.edges
            for ge in candidates:
                ge_set = set(ge)
                if any(image[x] not in ge_set for x in mapped):
                    continue
                leftover = [u for u in ge if u not in {image[x] for x in mapped}]
                for perm in itertools.permutations(leftover):
                    if any(u in taken for u in perm):
                        continue
                    for x, u in zip(free, perm):
                        image[x] = u
                        taken.add(u)
                    chosen.append(ge)
                    yield from extend(i + 1)
                    chosen.pop()
                    for x in free:
                        taken.discard(image[x])
                        del image[x]

        yield from extend(0)


def count_copies(g: Hypergraph, pattern, limit: int | None = None) -> int:
    """Number of distinct copies (edge sets) of the pattern in g."""
    pattern = _as_pattern(pattern)
    return sum(1 for _ in _iter_copies(g, pattern, limit=limit))


def find_copy(g: Hypergraph, pattern) -> frozenset | None:
    """One copy of the pattern in g, or None."""
    pattern = _as_pattern(pattern)
    for copy in _iter_copies(g, pattern):
        return copy
    return None


def completes_copy(g: Hypergraph, edge: Iterable[int], pattern) -> bool:
    """Would adding `edge` to g create a copy of the pattern through it?

    True also when the edge is already present and lies on a copy.
    """
    pattern = _as_pattern(pattern)
    e = edge_key(edge, g.r)
    host = g if e in g else g.with_edges([e])
    for _ in _iter_copies(host, pattern, pinned=e):
        return True
    return False


# ----------------------------------------------------------------------
# expectations


def expected_copies(n: int, r: int, d: int, pattern, exact: bool = False):
    """Expected number of copies of the pattern in a uniform d-regular
    r-graph on n vertices, to first order:

        C(n, v) * v! / aut(F) * p^e

    With exact=False, p is the usual (r-1)! d / n^(r-1) and a float comes
    back; exact=True uses the symmetry-exact edge probability
    (nd/r) / C(n, r) and returns a Fraction.  Either way edge occupancies
    are treated as independent, so this is the leading term, not the exact
    mean.
    """
    pattern = _as_pattern(pattern)
    if pattern.r != r:
        raise HypergraphError(f"pattern arity {pattern.r} != {r}")
    if not regular_class_feasible(n, r, d):
        raise InfeasibleError(f"no {d}-regular {r}-graph on {n} vertices")
    v, e = pattern.vertex_count, pattern.edge_count
    placements = math.comb(n, v) * math.factorial(v) // pattern.automorphisms
    if exact:
        p = Fraction(n * d, r) / math.comb(n, r)
        return placements * p**e
    p = math.factorial(r - 1) * d / n ** (r - 1)
    return placements * p**e


def _sub_pattern(pattern: Pattern, edges: tuple, strip_isolated: bool) -> Pattern:
    touched = sorted({v for e in edges for v in e})
    if strip_isolated:
        relabel = {v: i for i, v in enumerate(touched)}
        g = Hypergraph(
            len(touched),
            pattern.r,
            [tuple(relabel[v] for v in e) for e in edges],
        )
    else:
        g = Hypergraph(pattern.vertex_count, pattern.r, list(edges))
    return Pattern(g, name=f"{pattern.name}[{len(edges)} edges]")


def min_expected_copies(
    n: int,
    r: int,
    d: int,
    pattern,
    exact: bool = True,
    strip_isolated: bool = True,
):
    """Minimum of expected_copies over all sub-patterns with at least one
    edge, with the minimising sub-pattern as witness.

    Sub-patterns keep only the vertices their edges touch by default;
    strip_isolated=False retains untouched pattern vertices, which deflates
    the expectation by the extra placement freedom and makes the minimum
    smaller or equal.  Returns (value, witness).
    """
    pattern = _as_pattern(pattern)
    e_count = pattern.edge_count
    if e_count == 0:
        raise HypergraphError("pattern has no edges")
    if e_count > 14 or pattern.vertex_count > 8:
        raise TooLargeError("sub-pattern scan supports at most 14 edges, 8 vertices")
    best = None
    witness = None
    edges = pattern.graph.edges
    for size in range(1, e_count + 1):
        for subset in itertools.combinations(edges, size):
            sub = _sub_pattern(pattern, subset, strip_isolated)
            value = expected_copies(n, r, d, sub, exact=exact)
            if best is None or value < best:
                best = value
                witness = sub
    return best, witness


# ----------------------------------------------------------------------
# conflict graph, packing, deletion


@dataclass
class ConflictGraph:
    """Copies of a pattern in a host, with an edge between copies that
    share at least one host edge."""

    copies: tuple
    adjacency: tuple

    @property
    def node_count(self) -> int:
        return len(self.copies)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


def conflict_graph(g: Hypergraph, pattern, copy_budget: int = 100_000) -> ConflictGraph:
    pattern = _as_pattern(pattern)
    copies = sorted(
        _iter_copies(g, pattern, limit=copy_budget),
        key=lambda c: sorted(c),
    )
    # invert: host edge -> copies through it, then join
    through: dict[tuple, list[int]] = {}
    for i, copy in enumerate(copies):
        for e in copy:
            through.setdefault(e, []).append(i)
    neighbours: list[set[int]] = [set() for _ in copies]
    for owners in through.values():
        for i, j in itertools.combinations(owners, 2):
            neighbours[i].add(j)
            neighbours[j].add(i)
    return ConflictGraph(
        copies=tuple(copies),
        adjacency=tuple(tuple(sorted(s)) for s in neighbours),
    )


def turan_bound(nodes: int, edges: int) -> int:
    """ceil(v^2 / (2e + v)): a guaranteed independent-set size in any graph
    with v nodes and e edges."""
    if nodes == 0:
        return 0
    return -(-(nodes * nodes) // (2 * edges + nodes))


def greedy_packing(g: Hypergraph, pattern, conflict: ConflictGraph | None = None):
    """Edge-disjoint copies picked by repeated minimum conflict degree.

    The result size is always at least turan_bound over the conflict graph.
    Returns the list of chosen copies.
    """
    conflict = conflict or conflict_graph(g, pattern)
    alive: set[int] = set(range(conflict.node_count))
    degree = {i: len(conflict.adjacency[i]) for i in alive}
    chosen: list = []
    while alive:
        best = min(alive, key=lambda i: (degree[i], i))
        chosen.append(conflict.copies[best])
        dead = {best} | (set(conflict.adjacency[best]) & alive)
        alive -= dead
        for i in dead:
            for j in conflict.adjacency[i]:
                if j in alive:
                    degree[j] -= 1
    return chosen


def exact_packing(
    g: Hypergraph, pattern, cap: int = 24, conflict: ConflictGraph | None = None
) -> int:
    """Maximum number of pairwise edge-disjoint copies, by branch and bound
    on the conflict graph.  Refuses more than `cap` copies."""
    conflict = conflict or conflict_graph(g, pattern)
    count = conflict.node_count
    if count > cap:
        raise TooLargeError(f"{count} copies exceeds exact cap {cap}")
    adjacency = [set(a) for a in conflict.adjacency]
    best = 0

    def recurse(alive: set[int], size: int) -> None:
        nonlocal best
        if size + len(alive) <= best:
            return
        if not alive:
            best = max(best, size)
            return
        v = max(alive, key=lambda i: (len(adjacency[i] & alive), -i))
        recurse(alive - {v} - adjacency[v], size + 1)
        recurse(alive - {v}, size)

    recurse(set(range(count)), 0)
    return best


def min_deletion_distance(g: Hypergraph, pattern, cap: int = 24) -> int:
    """Smallest number of host edges whose removal kills every copy.

    Branch and bound over the copy list with a greedy disjoint-copy lower
    bound; refuses hosts holding more than `cap` copies.
    """
    pattern = _as_pattern(pattern)
    copies = list(_iter_copies(g, pattern, limit=cap))
    if not copies:
        return 0

    def disjoint_lower_bound(pool) -> int:
        taken: set = set()
        got = 0
        for c in sorted(pool, key=lambda c: sorted(c)):
            if not (c & taken):
                got += 1
                taken |= c
        return got

    def greedy_upper(pool) -> int:
        pool = list(pool)
        hits = 0
        while pool:
            counter: dict = {}
            for c in pool:
                for e in c:
                    counter[e] = counter.get(e, 0) + 1
            e = max(sorted(counter), key=lambda e: counter[e])
            pool = [c for c in pool if e not in c]
            hits += 1
        return hits

    best = greedy_upper(copies)

    def recurse(pool, deleted: int) -> None:
        nonlocal best
        if not pool:
            best = min(best, deleted)
            return
        if deleted + disjoint_lower_bound(pool) >= best:
            return
        target = min(pool, key=lambda c: (len(c), sorted(c)))
        for e in sorted(target):
            recurse([c for c in pool if e not in c], deleted + 1)

    recurse(copies, 0)
    return best


def farness(g: Hypergraph, pattern, cap: int = 24):
    """Fraction of edges that must be deleted to clear every copy.

    Returns (value, exact_flag); when the copy list is too large for the
    exact branch and bound the greedy packing size stands in as a lower
    bound and the flag is False.
    """
    m = len(g)
    if m == 0:
        return Fraction(0), True
    try:
        return Fraction(min_deletion_distance(g, pattern, cap=cap), m), True
    except TooLargeError:
        return Fraction(len(greedy_packing(g, pattern)), m), False


# ----------------------------------------------------------------------
# ready-made patterns


def single_edge(r: int = 2) -> Pattern:
    return Pattern(Hypergraph(r, r, [tuple(range(r))]), name=f"edge-r{r}")


def triangle() -> Pattern:
    return Pattern(Hypergraph(3, 2, [(0, 1), (1, 2), (0, 2)]), name="triangle")


def complete_pattern(k: int, r: int = 2) -> Pattern:
    """All r-subsets of k vertices."""
    if k < r:
        raise HypergraphError(f"need k >= r, got k={k}, r={r}")
    return Pattern(
        Hypergraph(k, r, list(itertools.combinations(range(k), r))),
        name=f"complete-{k}" if r == 2 else f"complete-{k}-r{r}",
    )


def loose_path(length: int, r: int = 3) -> Pattern:
    """Path of `length` edges, consecutive edges sharing one vertex."""
    if length < 1:
        raise HypergraphError("length must be >= 1")
    edges = [
        tuple(range(j * (r - 1), j * (r - 1) + r)) for j in range(length)
    ]
    return Pattern(
        Hypergraph(length * (r - 1) + 1, r, edges), name=f"loose-path-{length}-r{r}"
    )


def matching_pattern(size: int, r: int = 2) -> Pattern:
    """`size` pairwise disjoint edges."""
    if size < 1:
        raise HypergraphError("size must be >= 1")
    edges = [tuple(range(j * r, (j + 1) * r)) for j in range(size)]
    return Pattern(Hypergraph(size * r, r, edges), name=f"matching-{size}-r{r}")
