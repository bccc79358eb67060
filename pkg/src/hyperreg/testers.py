"""Query oracles and one-sided freeness testers.

The oracle hides a hypergraph behind two query types: membership of an
r-set, and "the i-th edge incident to v" under a fixed random labelling of
each incidence list.  Every answered query lands in a History (edges
confirmed present, confirmed absent, degree facts), counters only go up,
and an optional hard budget aborts the caller mid-run.

Three testers, all one-sided (a reject always carries a witness copy made
of confirmed edges):

* bfs_tester samples vertices and explores their neighbourhoods to depth
  diameter+1,
* edge_rooted_bfs_tester samples a uniform incident edge per vertex and
  explores to depth diameter; only valid for patterns whose outermost
  distance layer from every edge spans no edge,
* canonical_tester samples a vertex subset of computed size s and queries
  all of its r-sets.

The lower-bound side builds hard instances: a clique plus isolated
vertices, a pattern-free host, and the blocked family of independent
uniform regular blocks sized so the minimum expected sub-pattern count
saturates its ceiling.
"""

from __future__ import annotations

import itertools
import math
import random
import statistics
from dataclasses import dataclass

from .core import (
    Hypergraph,
    HypergraphError,
    InfeasibleError,
    VertexOutOfRangeError,
    edge_key,
    regular_class_feasible,
)
from . import census
from .census import Pattern, find_copy
from .sampling import SamplerConfig, sample_mcmc, sample_pairing, seeded_rng
from .spanning import analyze_pattern, extremal_number_exact

__all__ = [
    "DEGREE_EXCEEDED",
    "Oracle",
    "History",
    "TesterVerdict",
    "BlockedFamilyParams",
    "QueryBudgetExceededError",
    "PatternNotEligibleError",
    "IsolatedVertexPatternError",
    "WeakForestPatternError",
    "ConstructionUnavailableError",
    "is_simple",
    "bfs_tester",
    "edge_rooted_bfs_tester",
    "canonical_tester",
    "build_lowerbound_family",
    "saturated_block_size",
    "blocked_family_params",
    "build_blocked_instance",
    "simple_history_experiment",
    "median_smooth3",
]


class QueryBudgetExceededError(RuntimeError):
    """The oracle's hard query budget was hit."""


class PatternNotEligibleError(HypergraphError):
    """Edge-rooted BFS needs the outermost layer of every edge edge-free."""


class IsolatedVertexPatternError(HypergraphError):
    """The canonical tester rejects patterns with isolated vertices."""


class WeakForestPatternError(HypergraphError):
    """Blocked instances only separate patterns that are not weak forests."""


class ConstructionUnavailableError(HypergraphError):
    """No known pattern-free host construction at this size."""


class _DegreeExceeded:
    def __repr__(self):
        return "DEGREE_EXCEEDED"


# sentinel answer for a neighbour query past the vertex's degree
DEGREE_EXCEEDED = _DegreeExceeded()


class History:
    """What a run of queries has revealed about the hidden graph.

    edges_present and edges_absent hold confirmed r-sets; degree_facts the
    exactly determined (vertex, degree) pairs.  Lower bounds from answered
    neighbour queries and exclusive upper bounds from DEGREE_EXCEEDED
    answers are tracked too, and promote to exact facts when they meet.
    """

    def __init__(self, n: int, r: int):
        self.n = n
        self.r = r
        self.edges_present: set[tuple[int, ...]] = set()
        self.edges_absent: set[tuple[int, ...]] = set()
        self.degree_exact: dict[int, int] = {}
        self.degree_lower: dict[int, int] = {}
        self.degree_upper: dict[int, int] = {}

    @property
    def degree_facts(self) -> set[tuple[int, int]]:
        return set(self.degree_exact.items())

    def note_edge(self, edge: tuple[int, ...], present: bool) -> None:
        (self.edges_present if present else self.edges_absent).add(edge)

    def note_degree_at_least(self, v: int, bound: int) -> None:
        if bound > self.degree_lower.get(v, 0):
            self.degree_lower[v] = bound
        self._maybe_exact(v)

    def note_degree_less_than(self, v: int, bound: int) -> None:
        cur = self.degree_upper.get(v)
        if cur is None or bound < cur:
            self.degree_upper[v] = bound
        self._maybe_exact(v)

    def _maybe_exact(self, v: int) -> None:
        upper = self.degree_upper.get(v)
        if upper is not None and self.degree_lower.get(v, 0) == upper - 1:
            self.degree_exact[v] = upper - 1


def is_simple(history: History, d: int, c_simple: int = 4) -> bool:
    """A history is simple when its confirmed edges form a weak forest and
    no revealed degree (exact or lower bound) exceeds c_simple*d."""
    limit = c_simple * d
    if any(deg > limit for deg in history.degree_exact.values()):
        return False
    if any(bound > limit for bound in history.degree_lower.values()):
        return False
    revealed = Hypergraph(history.n, history.r, sorted(history.edges_present))
    return revealed.is_weak_forest()


class Oracle:
    """Query access to a hidden hypergraph.

    The incidence list of each vertex is shuffled once at construction
    from the seed, so "the i-th edge of v" is stable across a run and
    reproducible.  `budget` caps the total number of answered queries;
    the query that would exceed it raises QueryBudgetExceededError
    unanswered and unrecorded.

    The `hidden` attribute is for audits only; testers must stay inside
    the query API.
    """

    def __init__(self, hidden: Hypergraph, seed=0, budget: int | None = None):
        self.hidden = hidden
        self.budget = budget
        self.vertex_set_queries = 0
        self.neighbour_queries = 0
        self.history = History(hidden.n, hidden.r)
        self._labelling = []
        for v in range(hidden.n):
            order = list(hidden.incidence[v])
            seeded_rng("oracle", seed, v).shuffle(order)
            self._labelling.append(order)

    @property
    def n(self) -> int:
        return self.hidden.n

    @property
    def r(self) -> int:
        return self.hidden.r

    @property
    def total_queries(self) -> int:
        return self.vertex_set_queries + self.neighbour_queries

    def _charge(self) -> None:
        if self.budget is not None and self.total_queries + 1 > self.budget:
            raise QueryBudgetExceededError(f"budget {self.budget} exhausted")

    def vertex_set_query(self, vertices) -> bool:
        """Is this r-set an edge?"""
        edge = edge_key(vertices, self.hidden.r)
        if edge[0] < 0 or edge[-1] >= self.hidden.n:
            raise VertexOutOfRangeError(f"vertices {edge} not within 0..{self.n - 1}")
        self._charge()
        self.vertex_set_queries += 1
        present = edge in self.hidden
        self.history.note_edge(edge, present)
        return present

    def neighbour_query(self, v: int, i: int):
        """The i-th (1-based) edge incident to v, as the other r-1
        vertices, or DEGREE_EXCEEDED when v has fewer than i edges."""
        if not 0 <= v < self.hidden.n:
            raise VertexOutOfRangeError(f"vertex {v} not within 0..{self.n - 1}")
        if i < 1:
            raise HypergraphError(f"neighbour index must be >= 1, got {i}")
        self._charge()
        self.neighbour_queries += 1
        order = self._labelling[v]
        if i > len(order):
            self.history.note_degree_less_than(v, i)
            return DEGREE_EXCEEDED
        edge = self.hidden.edges[order[i - 1]]
        self.history.note_edge(edge, True)
        self.history.note_degree_at_least(v, i)
        return tuple(u for u in edge if u != v)

    def degree_probe(self, v: int) -> int:
        """Exact degree of v by doubling then binary search; at most
        2*ceil(log2(deg+1)) + 2 neighbour queries, free when a previous
        probe already pinned the degree down."""
        if not 0 <= v < self.hidden.n:
            raise VertexOutOfRangeError(f"vertex {v} not within 0..{self.n - 1}")
        if v in self.history.degree_exact:
            return self.history.degree_exact[v]
        lo = 0  # deg >= lo proven
        hi = 1
        while self.neighbour_query(v, hi) is not DEGREE_EXCEEDED:
            lo = hi
            hi *= 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.neighbour_query(v, mid) is DEGREE_EXCEEDED:
                hi = mid
            else:
                lo = mid
        self.history.degree_exact[v] = lo
        return lo


@dataclass
class TesterVerdict:
    accept: bool
    # on reject: the found copy, a frozenset of confirmed edges
    witness: frozenset | None
    vertex_set_queries: int
    neighbour_queries: int
    sample_size: int | None = None


def _verdict(oracle: Oracle, before: tuple[int, int], copy) -> TesterVerdict:
    return TesterVerdict(
        accept=copy is None,
        witness=copy,
        vertex_set_queries=oracle.vertex_set_queries - before[0],
        neighbour_queries=oracle.neighbour_queries - before[1],
    )


class _Explorer:
    """Shared BFS plumbing: full incident-edge enumeration with a local
    cache so a vertex is expanded (and paid for) at most once per run."""

    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.edges_of: dict[int, list[tuple[int, ...]]] = {}
        self.collected: set[tuple[int, ...]] = set()

    def expand(self, v: int) -> list[tuple[int, ...]]:
        if v in self.edges_of:
            return self.edges_of[v]
        out = []
        i = 1
        while True:
            answer = self.oracle.neighbour_query(v, i)
            if answer is DEGREE_EXCEEDED:
                break
            out.append(edge_key(answer + (v,), self.oracle.r))
            i += 1
        self.edges_of[v] = out
        self.collected.update(out)
        return out

    def bfs(self, roots, expand_depth: int) -> None:
        """Expand every vertex within distance < expand_depth of the
        roots; edges reaching one level further are still revealed."""
        dist = {v: 0 for v in roots}
        frontier = [v for v in roots]
        while frontier:
            nxt = []
            for u in frontier:
                if dist[u] >= expand_depth:
                    continue
                for e in self.expand(u):
                    for w in e:
                        if w not in dist:
                            dist[w] = dist[u] + 1
                            nxt.append(w)
            frontier = nxt

    def graph(self) -> Hypergraph:
        o = self.oracle
        return Hypergraph(o.n, o.r, sorted(self.collected))


def _sample_count(eps: float, c1: int) -> int:
    if eps <= 0:
        raise HypergraphError(f"eps must be positive, got {eps}")
    return math.ceil(c1 / eps)


def bfs_tester(
    oracle: Oracle,
    pattern,
    eps: float,
    c1: int = 8,
    rng: random.Random | None = None,
) -> TesterVerdict:
    """Sample ceil(c1/eps) vertices, explore each to depth diameter+1, and
    reject iff the explored subgraph contains the pattern."""
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    if not pattern.graph.is_connected():
        raise HypergraphError("bfs tester needs a connected pattern")
    rng = rng or random.Random(0)
    before = (oracle.vertex_set_queries, oracle.neighbour_queries)
    depth = pattern.graph.diameter() + 1
    explorer = _Explorer(oracle)
    for _ in range(_sample_count(eps, c1)):
        explorer.bfs([rng.randrange(oracle.n)], depth)
        copy = find_copy(explorer.graph(), pattern)
        if copy is not None:
            return _verdict(oracle, before, copy)
    return _verdict(oracle, before, None)


def edge_rooted_bfs_tester(
    oracle: Oracle,
    pattern,
    eps: float,
    c1: int = 8,
    rng: random.Random | None = None,
) -> TesterVerdict:
    """Per sampled vertex: probe its degree, pick one incident edge
    uniformly, and explore around that edge to depth diameter.  Sound for
    patterns whose outermost layer from every edge spans no edge; for
    those, every copy through the root edge is fully revealed."""
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    analysis = analyze_pattern(pattern)
    if not analysis.outer_layer_edge_free:
        raise PatternNotEligibleError(
            "pattern has an edge inside some outermost distance layer"
        )
    rng = rng or random.Random(0)
    before = (oracle.vertex_set_queries, oracle.neighbour_queries)
    explorer = _Explorer(oracle)
    for _ in range(_sample_count(eps, c1)):
        v = rng.randrange(oracle.n)
        degree = oracle.degree_probe(v)
        if degree == 0:
            continue
        answer = oracle.neighbour_query(v, rng.randint(1, degree))
        root = edge_key(answer + (v,), oracle.r)
        explorer.collected.add(root)
        explorer.bfs(list(root), analysis.diameter)
        copy = find_copy(explorer.graph(), pattern)
        if copy is not None:
            return _verdict(oracle, before, copy)
    return _verdict(oracle, before, None)


def canonical_sample_size(
    n: int, d: int, eps: float, pattern, c: int = 4, max_degree: int | None = None
) -> int:
    """Sample size s = c * max(n/(eps n d)^(1/v), (n^(l-2) Delta/(eps d))^(1/(l-1))),
    rounded up and capped at n; l is the pattern's vertex-overlap index."""
    if eps <= 0:
        raise HypergraphError(f"eps must be positive, got {eps}")
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    delta = max_degree if max_degree is not None else d
    ell = analyze_pattern(pattern).overlap_index
    v = pattern.vertex_count
    first = n / (eps * n * d) ** (1.0 / v)
    second = (n ** (ell - 2) * delta / (eps * d)) ** (1.0 / (ell - 1))
    return min(n, math.ceil(c * max(first, second)))


def canonical_tester(
    oracle: Oracle,
    pattern,
    eps: float,
    d: int,
    c: int = 4,
    max_degree: int | None = None,
    rng: random.Random | None = None,
) -> TesterVerdict:
    """Query every r-set inside a uniform vertex sample of computed size
    and reject iff the induced subgraph contains the pattern.  Issues
    exactly C(s, r) vertex-set queries and no neighbour queries."""
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    if pattern.has_isolated_vertex:
        raise IsolatedVertexPatternError("pattern has isolated vertices")
    rng = rng or random.Random(0)
    before = (oracle.vertex_set_queries, oracle.neighbour_queries)
    s = canonical_sample_size(oracle.n, d, eps, pattern, c=c, max_degree=max_degree)
    sample = sorted(rng.sample(range(oracle.n), s))
    present = [
        combo
        for combo in itertools.combinations(sample, oracle.r)
        if oracle.vertex_set_query(combo)
    ]
    copy = find_copy(Hypergraph(oracle.n, oracle.r, present), pattern)
    verdict = _verdict(oracle, before, copy)
    verdict.sample_size = s
    return verdict


# ----------------------------------------------------------------------
# hard instance constructions


def _chromatic_number(g: Hypergraph) -> int:
    """Brute-force chromatic number for tiny 2-graphs."""
    adj = [set() for _ in range(g.n)]
    for a, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    for k in range(1, g.n + 1):
        colors = [-1] * g.n

        def colorable(v: int) -> bool:
            if v == g.n:
                return True
            for col in range(k):
                if all(colors[u] != col for u in adj[v]):
                    colors[v] = col
                    if colorable(v + 1):
                        return True
                    colors[v] = -1
            return False

        if colorable(0):
            return k
    return g.n


def _multipartite_host(h: int, parts: int, cap: int) -> list[tuple[int, int]]:
    """First `cap` edges of the balanced complete `parts`-partite graph on
    h vertices (vertex v sits in part v mod parts), in lexicographic order."""
    edges = [
        (a, b)
        for a in range(h)
        for b in range(a + 1, h)
        if a % parts != b % parts
    ]
    return edges[:cap]


def build_lowerbound_family(
    n: int,
    d: int,
    pattern,
    which: str,
    rng: random.Random | None = None,
    host_cap: int = 9,
) -> Hypergraph:
    """One labelled hard instance with about nd/r edges.

    which="clique": a complete r-graph on ceil((n d (r-1)!)^(1/r)) vertices
    plus isolated vertices; contains the pattern as soon as the clique is
    big enough, yet any o(1) fraction of vertex samples misses it.

    which="free-host": a pattern-free host with exactly nd/r edges, placed
    on a random vertex subset.  Non-bipartite 2-graph patterns get a
    balanced complete (chi-1)-partite host; otherwise tiny hosts are found
    by exact extremal search up to host_cap vertices.
    """
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    r = pattern.r
    rng = rng or random.Random(0)
    if which == "clique":
        k = math.ceil((n * d * math.factorial(r - 1)) ** (1.0 / r))
        if k > n:
            raise ConstructionUnavailableError(
                f"clique construction needs {k} vertices, have {n}"
            )
        k = max(k, r)
        spots = sorted(rng.sample(range(n), k))
        return Hypergraph(n, r, list(itertools.combinations(spots, r)))
    if which != "free-host":
        raise ValueError(f"unknown family {which!r}")
    if (n * d) % r != 0:
        raise InfeasibleError(f"r={r} does not divide n*d={n * d}")
    target = n * d // r
    if r == 2 and _chromatic_number(pattern.graph) >= 3:
        parts = _chromatic_number(pattern.graph) - 1
        for h in range(max(2, parts), n + 1):
            edges = _multipartite_host(h, parts, target)
            if len(edges) == target:
                spots = sorted(rng.sample(range(n), h))
                return Hypergraph(
                    n, r, [(spots[a], spots[b]) for a, b in edges]
                )
        raise ConstructionUnavailableError(
            f"multipartite host cannot reach {target} edges within {n} vertices"
        )
    for h in range(r, min(n, host_cap) + 1):
        result = extremal_number_exact(h, pattern, node_budget=2 * 10**6)
        if result.value >= target:
            spots = sorted(rng.sample(range(n), h))
            edges = sorted(result.witness.edges)[:target]
            return Hypergraph(
                n, r, [tuple(spots[v] for v in e) for e in edges]
            )
    raise ConstructionUnavailableError(
        f"no pattern-free host with {target} edges found up to {host_cap} vertices"
    )


def saturated_block_size(n: int, d: int, pattern, eta: float) -> int:
    """Largest block size n0 <= n at which the minimum expected sub-pattern
    count still reaches (1-eta) of its ceiling n0*d/r (the edge count)."""
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    r = pattern.r
    for n0 in range(n, r - 1, -1):
        if not regular_class_feasible(n0, r, d) or n0 < r:
            continue
        phi, _ = census.min_expected_copies(n0, r, d, pattern, exact=True)
        if phi >= (1.0 - eta) * n0 * d / r:
            return n0
    raise InfeasibleError(
        f"no feasible block size saturates at (n={n}, d={d}, eta={eta})"
    )


@dataclass
class BlockedFamilyParams:
    saturated_size: int  # largest saturating block size
    block_count: int
    block_sizes: tuple[int, ...]
    eta: float


def blocked_family_params(n: int, d: int, pattern, eta: float) -> BlockedFamilyParams:
    """Block layout for the hard family: t = floor(n/n0) blocks of size
    n/t (rounded, then nudged pairwise to restore per-block feasibility)."""
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    r = pattern.r
    n0 = saturated_block_size(n, d, pattern, eta)
    t = n // n0
    base, rem = divmod(n, t)
    sizes = [base + 1] * rem + [base] * (t - rem)
    for _ in range(100):
        bad = [i for i, s in enumerate(sizes) if not regular_class_feasible(s, r, d)]
        if not bad:
            break
        if len(bad) >= 2:
            sizes[bad[0]] += 1
            sizes[bad[1]] -= 1
        else:
            good = next(
                i for i, s in enumerate(sizes) if regular_class_feasible(s, r, d)
            )
            sizes[bad[0]] += 1
            sizes[good] -= 1
    else:
        raise InfeasibleError(f"cannot make {t} feasible blocks out of {n} vertices")
    if any(not regular_class_feasible(s, r, d) for s in sizes):
        raise InfeasibleError(f"cannot make {t} feasible blocks out of {n} vertices")
    return BlockedFamilyParams(
        saturated_size=n0, block_count=t, block_sizes=tuple(sizes), eta=eta
    )


def build_blocked_instance(
    n: int,
    d: int,
    pattern,
    eta: float,
    rng: random.Random | None = None,
    method: str = "pairing",
) -> Hypergraph:
    """Disjoint union of independent uniform d-regular blocks at the
    saturating size, with vertex labels shuffled."""
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    if pattern.graph.is_weak_forest():
        raise WeakForestPatternError(
            "blocked instances need a pattern that is not a weak forest"
        )
    rng = rng or random.Random(0)
    params = blocked_family_params(n, d, pattern, eta)
    r = pattern.r
    edges: list[tuple[int, ...]] = []
    offset = 0
    for size in params.block_sizes:
        if method == "pairing":
            block = sample_pairing(size, r, d, rng)
        elif method == "mcmc":
            block = sample_mcmc(size, r, d, SamplerConfig(method="mcmc"), rng)
        else:
            raise ValueError(f"unknown method {method!r}")
        edges.extend(tuple(v + offset for v in e) for e in block.edges)
        offset += size
    relabel = list(range(n))
    rng.shuffle(relabel)
    return Hypergraph(n, r, [tuple(relabel[v] for v in e) for e in edges])


def simple_history_experiment(
    n: int,
    d: int,
    pattern,
    budgets,
    trials: int,
    eta: float = 0.1,
    eps: float | None = None,
    c: int = 4,
    c_simple: int = 4,
    seed=0,
    require_copy: bool = True,
    method: str = "pairing",
) -> list[dict]:
    """Run the canonical tester against fresh blocked instances under a
    hard query budget and record how often the resulting history is not
    simple.  Returns one {budget, fraction} row per budget.

    eps defaults to a value small enough that the tester samples every
    vertex, so the exhaustive budget reveals the whole instance.  With
    require_copy, instances are redrawn until they contain the pattern.
    """
    pattern = census.Pattern(pattern) if isinstance(pattern, Hypergraph) else pattern
    eps_value = eps if eps is not None else 1e-9
    rows = []
    for budget in budgets:
        not_simple = 0
        for trial in range(trials):
            instance_rng = seeded_rng(seed, "blocked", budget, trial)
            for attempt in range(50):
                instance = build_blocked_instance(
                    n, d, pattern, eta, instance_rng, method=method
                )
                if not require_copy or find_copy(instance, pattern) is not None:
                    break
            else:
                raise InfeasibleError("no instance containing the pattern in 50 draws")
            oracle = Oracle(
                instance, seed=f"{seed}|oracle|{budget}|{trial}", budget=budget
            )
            try:
                canonical_tester(
                    oracle,
                    pattern,
                    eps_value,
                    d,
                    c=c,
                    rng=seeded_rng(seed, "tester", budget, trial),
                )
            except QueryBudgetExceededError:
                pass
            if not is_simple(oracle.history, d, c_simple):
                not_simple += 1
        rows.append({"budget": budget, "fraction": not_simple / trials})
    return rows


def median_smooth3(values):
    """3-point median smoothing with clipped windows at the ends."""
    values = list(values)
    return [
        statistics.median(values[max(0, i - 1) : i + 2]) for i in range(len(values))
    ]
