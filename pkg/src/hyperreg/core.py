"""Core r-uniform hypergraph type, metrics, and the text interchange format.

Vertices are the integers 0..n-1.  An edge is a sorted r-tuple of distinct
vertices.  A hypergraph keeps its edges in insertion order and, for every
vertex, an ordered incidence list (the i-th incident edge of a vertex is the
i-th inserted edge containing it).  Instances are immutable after
construction, so they can be shared freely across threads; anything that
"mutates" builds a new value.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Hypergraph",
    "HypergraphError",
    "EdgeArityError",
    "DuplicateEdgeError",
    "VertexOutOfRangeError",
    "ParseError",
    "InfeasibleError",
    "DivisibilityError",
    "TooLargeError",
    "edge_key",
    "regular_class_feasible",
    "parse",
    "serialize",
]

INFINITE = math.inf  # returned by distance/diameter on disconnected inputs


class HypergraphError(ValueError):
    """Base class for structural validation failures."""


class EdgeArityError(HypergraphError):
    """An edge does not consist of exactly r distinct vertices."""


class DuplicateEdgeError(HypergraphError):
    """The same edge was supplied twice."""


class VertexOutOfRangeError(HypergraphError):
    """A vertex index is negative or >= n."""


class ParseError(HypergraphError):
    """Malformed hypergraph text; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasibleError(HypergraphError):
    """No d-regular r-graph exists for the requested parameters."""


class DivisibilityError(HypergraphError):
    """A divisibility precondition (such as (r - overlap) | n) fails."""


class TooLargeError(RuntimeError):
    """A configurable enumeration or search budget was exceeded."""


def edge_key(vertices: Iterable[int], r: int | None = None) -> tuple[int, ...]:
    """Canonical form of an edge: strictly ascending vertex tuple.

    Raises EdgeArityError on repeated vertices or, when r is given, on a
    size mismatch.
    """
    key = tuple(sorted(vertices))
    if len(set(key)) != len(key):
        raise EdgeArityError(f"repeated vertex in edge {key}")
    if r is not None and len(key) != r:
        raise EdgeArityError(f"edge {key} has {len(key)} vertices, expected {r}")
    return key


def regular_class_feasible(n: int, r: int, d: int) -> bool:
    """Whether d-regular r-graphs on n vertices can exist at all.

    Checks the counting constraint r | n*d and the per-vertex capacity
    d <= C(n-1, r-1).  (These are also sufficient for n >= r.)
    """
    return (n * d) % r == 0 and d <= math.comb(n - 1, r - 1)


class Hypergraph:
    """An r-uniform hypergraph on vertex set {0, ..., n-1}."""

    __slots__ = ("n", "r", "edges", "incidence", "_edge_set", "_hash")

    def __init__(self, n: int, r: int, edges: Iterable[Iterable[int]]):
        if r < 2:
            raise HypergraphError(f"uniformity r={r} must be at least 2")
        if n < r:
            raise HypergraphError(f"need n >= r, got n={n}, r={r}")
        keys: list[tuple[int, ...]] = []
        seen: set[tuple[int, ...]] = set()
        for e in edges:
            key = edge_key(e, r)
            if key[0] < 0 or key[-1] >= n:
                raise VertexOutOfRangeError(f"edge {key} not within 0..{n - 1}")
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}")
            seen.add(key)
            keys.append(key)
        incidence: list[list[int]] = [[] for _ in range(n)]
        for idx, key in enumerate(keys):
            for v in key:
                incidence[v].append(idx)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "edges", tuple(keys))
        object.__setattr__(self, "incidence", tuple(tuple(ix) for ix in incidence))
        object.__setattr__(self, "_edge_set", frozenset(keys))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Hypergraph is immutable")

    # ------------------------------------------------------------------
    # basic queries

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self._edge_set

    def has_edge(self, edge: Iterable[int]) -> bool:
        return edge in self

    def edge_set(self) -> frozenset[tuple[int, ...]]:
        return self._edge_set

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.incidence[v])

    def degrees(self) -> list[int]:
        return [len(ix) for ix in self.incidence]

    def neighbours(self, v: int) -> set[int]:
        """Vertices sharing at least one edge with v (v excluded)."""
        self._check_vertex(v)
        out: set[int] = set()
        for idx in self.incidence[v]:
            out.update(self.edges[idx])
        out.discard(v)
        return out

    def is_regular(self, d: int) -> bool:
        return all(len(ix) == d for ix in self.incidence)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexOutOfRangeError(f"vertex {v} not within 0..{self.n - 1}")

    # ------------------------------------------------------------------
    # metrics

    def distance(self, u: int, v: int) -> int | float:
        """Minimum number of edges on a path from u to v.

        Two vertices in a common edge are at distance 1; dist(u, u) = 0.
        Returns math.inf when u and v lie in different components.
        """
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return 0
        dist = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            dx = dist[x]
            for idx in self.incidence[x]:
                for y in self.edges[idx]:
                    if y not in dist:
                        if y == v:
                            return dx + 1
                        dist[y] = dx + 1
                        queue.append(y)
        return INFINITE

    def eccentricities(self) -> list[int | float]:
        out: list[int | float] = []
        for u in range(self.n):
            dist = {u: 0}
            queue = deque([u])
            far = 0
            while queue:
                x = queue.popleft()
                for idx in self.incidence[x]:
                    for y in self.edges[idx]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            far = max(far, dist[y])
                            queue.append(y)
            out.append(far if len(dist) == self.n else INFINITE)
        return out

    def diameter(self) -> int | float:
        """Maximum pairwise distance; math.inf when disconnected."""
        if self.n <= 1:
            return 0
        worst: int | float = 0
        for ecc in self.eccentricities():
            if ecc == INFINITE:
                return INFINITE
            worst = max(worst, ecc)
        return worst

    def is_connected(self) -> bool:
        return self.n <= 1 or self.eccentricities()[0] != INFINITE

    def is_linear(self) -> bool:
        """No two edges share more than one vertex."""
        pair_seen: set[tuple[int, int]] = set()
        for e in self.edges:
            for i in range(len(e)):
                for j in range(i + 1, len(e)):
                    pair = (e[i], e[j])
                    if pair in pair_seen:
                        return False
                    pair_seen.add(pair)
        return True

    def is_weak_forest(self) -> bool:
        """True when pairwise edge intersections have size <= 1 and there is
        no cycle of edges meeting consecutively in single vertices.

        Uses the component count criterion: a linear hypergraph is acyclic
        exactly when every component with m edges spans m*(r-1)+1 vertices.
        """
        if not self.is_linear():
            return False
        parent = list(range(self.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            ra = find(e[0])
            for v in e[1:]:
                rb = find(v)
                if ra != rb:
                    parent[rb] = ra
        comp_vertices: dict[int, int] = {}
        comp_edges: dict[int, int] = {}
        for v in range(self.n):
            root = find(v)
            comp_vertices[root] = comp_vertices.get(root, 0) + 1
        for e in self.edges:
            root = find(e[0])
            comp_edges[root] = comp_edges.get(root, 0) + 1
        for root, m in comp_edges.items():
            if comp_vertices[root] != m * (self.r - 1) + 1:
                return False
        return True

    # ------------------------------------------------------------------
    # derived values

    def with_edges(self, extra: Sequence[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(self.n, self.r, list(self.edges) + list(extra))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.r, self._edge_set) == (other.n, other.r, other._edge_set)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.n, self.r, self._edge_set))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, r={self.r}, m={len(self.edges)})"


# ----------------------------------------------------------------------
# text format: header "n r m", then m lines of r ascending vertex indices


def serialize(g: Hypergraph) -> str:
    lines = [f"{g.n} {g.r} {len(g.edges)}"]
    for e in g.edges:
        lines.append(" ".join(str(v) for v in e))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Hypergraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    header = lines[0].split(" ")
    if len(header) != 3:
        raise ParseError(f"header must be 'n r m', got {lines[0]!r}", 1)
    try:
        n, r, m = (int(tok) for tok in header)
    except ValueError:
        raise ParseError(f"non-integer header field in {lines[0]!r}", 1) from None
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} edge lines, found {len(lines) - 1}", len(lines))
    edges = []
    for lineno, raw in enumerate(lines[1:], start=2):
        toks = raw.split(" ")
        if len(toks) != r:
            raise ParseError(f"expected {r} vertices, got {len(toks)}", lineno)
        try:
            verts = [int(t) for t in toks]
        except ValueError:
            raise ParseError(f"non-integer vertex in {raw!r}", lineno) from None
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise ParseError(f"vertices must be strictly ascending in {raw!r}", lineno)
        edges.append(verts)
    try:
        return Hypergraph(n, r, edges)
    except HypergraphError as exc:
        raise ParseError(str(exc)) from exc
