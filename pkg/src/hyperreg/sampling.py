"""Exact enumeration and uniform sampling of d-regular r-uniform hypergraphs.

Three routes to a uniformly random regular hypergraph:

* ``enumerate_regular`` lists the whole labelled class (tiny instances only),
* ``sample_pairing`` runs the stub-matching construction and rejects until
  the result is simple, which conditions it to be uniform,
* ``sample_mcmc`` walks the lazy switching chain from a deterministic
  start graph built out of stacked overlapping cycles.

Conditioning on a forced edge set and a forbidden edge set is done by
rejection.  The module also computes the closed-form edge-probability and
sandwich-comparison parameters used by the experiment CLI.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .core import (
    Hypergraph,
    HypergraphError,
    InfeasibleError,
    TooLargeError,
    edge_key,
    regular_class_feasible,
)
from .switching import random_switch_move

__all__ = [
    "SamplerConfig",
    "AsymptoticParams",
    "EdgeProbabilityEstimate",
    "RejectionCapError",
    "EmptyClassError",
    "seeded_rng",
    "enumerate_regular",
    "regular_seed_graph",
    "sample_pairing",
    "sample_mcmc",
    "sample_mcmc_stream",
    "sample_regular",
    "sample_conditional",
    "sample_binomial",
    "sample_fixed_edges",
    "theoretical_edge_probability",
    "exact_conditional_edge_probability",
    "estimate_edge_probability",
    "asymptotic_params",
]


class RejectionCapError(RuntimeError):
    """The rejection sampler ran out of attempts."""


class EmptyClassError(HypergraphError):
    """The conditioned class contains no hypergraph at all."""


def seeded_rng(*parts) -> random.Random:
    """Deterministic, platform-independent stream for a seed path.

    String seeding hashes with SHA-512 under the hood, so derived streams
    are reproducible across runs and machines.
    """
    return random.Random("|".join(str(p) for p in parts))


@dataclass
class SamplerConfig:
    method: str = "pairing"  # pairing | mcmc | enumerate
    seed: int = 0
    burn_in: int | None = None  # None picks 20*n*d lazy steps
    rejection_cap: int = 100_000
    thin: int | None = None  # chain steps between stream samples, None -> n*d

    def __post_init__(self):
        if self.method not in ("pairing", "mcmc", "enumerate"):
            raise ValueError(f"unknown sampling method {self.method!r}")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.rejection_cap < 1:
            raise ValueError("rejection_cap must be >= 1")


# ----------------------------------------------------------------------
# exact enumeration


def enumerate_regular(
    n: int, r: int, d: int, node_budget: int = 10**8
) -> list[Hypergraph]:
    """All labelled d-regular r-graphs on {0..n-1}, each exactly once.

    Backtracks over edges rooted at the smallest vertex that is still
    missing degree; edges rooted at the same pivot are produced in
    ascending lexicographic order, which makes the generated sequence of
    edges a canonical form of the final graph.
    """
    if (n * d) % r != 0:
        raise InfeasibleError(f"r={r} does not divide n*d={n * d}")
    results: list[Hypergraph] = []
    rem = [d] * n
    chosen: list[tuple[int, ...]] = []
    nodes = 0

    def recurse(prev_pivot: int, prev_edge: tuple[int, ...] | None) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise TooLargeError(f"enumeration exceeded {node_budget} nodes")
        pivot = next((v for v in range(n) if rem[v]), -1)
        if pivot == -1:
            results.append(Hypergraph(n, r, list(chosen)))
            return
        partners = [u for u in range(pivot + 1, n) if rem[u]]
        if len(partners) < r - 1:
            return
        lower = prev_edge if pivot == prev_pivot else None
        for combo in itertools.combinations(partners, r - 1):
            edge = (pivot,) + combo
            if lower is not None and edge <= lower:
                continue
            rem[pivot] -= 1
            for u in combo:
                rem[u] -= 1
            chosen.append(edge)
            recurse(pivot, edge)
            chosen.pop()
            rem[pivot] += 1
            for u in combo:
                rem[u] += 1

    recurse(-1, None)
    return results


# ----------------------------------------------------------------------
# deterministic start graph: stacked overlapping cycles


def _cycle_edges(order: Sequence[int], r: int, step: int) -> list[tuple[int, ...]]:
    """Edges of an overlapping cycle along the given vertex order.

    Consecutive edges advance by `step` positions, so they overlap in
    r - step vertices; step == r degenerates to a perfect matching.
    """
    n = len(order)
    return [
        tuple(sorted(order[(j * step + t) % n] for t in range(r)))
        for j in range(n // step)
    ]


def regular_seed_graph(n: int, r: int, d: int) -> Hypergraph:
    """A deterministic d-regular r-graph on n vertices.

    Writes r = r1*r2 with r1 = gcd(r, n) (then r2 divides d whenever
    r | n*d) and stacks d/r2 edge-disjoint cycles whose consecutive edges
    overlap in r - r1 vertices; each cycle is r2-regular.  Cycle orders are
    drawn from a fixed internal stream, so the result depends only on
    (n, r, d).
    """
    if not regular_class_feasible(n, r, d):
        raise InfeasibleError(f"no {d}-regular {r}-graph on {n} vertices")
    if n < r:
        raise InfeasibleError(f"need n >= r, got n={n}, r={r}")
    if d == 0:
        return Hypergraph(n, r, [])
    r1 = math.gcd(r, n)
    r2 = r // r1
    layers = d // r2
    rng = seeded_rng("seed-graph", n, r, d)
    for _ in range(200):
        used: set[tuple[int, ...]] = set()
        stacked: list[tuple[int, ...]] = []
        order = list(range(n))
        complete = True
        for layer in range(layers):
            placed = False
            for _ in range(500):
                edges = _cycle_edges(order, r, r1)
                if len(set(edges)) == len(edges) and not used.intersection(edges):
                    used.update(edges)
                    stacked.extend(edges)
                    placed = True
                    break
                rng.shuffle(order)
            if not placed:
                complete = False
                break
            rng.shuffle(order)
        if complete:
            return Hypergraph(n, r, stacked)
    raise InfeasibleError(
        f"could not stack {layers} edge-disjoint cycles for (n={n}, r={r}, d={d})"
    )


# ----------------------------------------------------------------------
# samplers


def sample_pairing(
    n: int, r: int, d: int, rng: random.Random, rejection_cap: int = 100_000
) -> Hypergraph:
    """Uniform d-regular r-graph via stub matching with full-restart rejection.

    Every vertex gets d stubs; a shuffle groups them into edges of r stubs.
    Attempts containing a repeated vertex inside an edge or a repeated edge
    are thrown away wholesale, so accepted outputs are uniform over the
    simple graphs.
    """
    if not regular_class_feasible(n, r, d):
        raise InfeasibleError(f"no {d}-regular {r}-graph on {n} vertices")
    stubs = [v for v in range(n) for _ in range(d)]
    for _ in range(rejection_cap):
        rng.shuffle(stubs)
        edges: list[tuple[int, ...]] = []
        seen: set[tuple[int, ...]] = set()
        ok = True
        for i in range(0, len(stubs), r):
            chunk = stubs[i : i + r]
            key = tuple(sorted(chunk))
            if len(set(chunk)) != r or key in seen:
                ok = False
                break
            seen.add(key)
            edges.append(key)
        if ok:
            return Hypergraph(n, r, edges)
    raise RejectionCapError(f"no simple pairing after {rejection_cap} attempts")


def sample_mcmc(
    n: int,
    r: int,
    d: int,
    config: SamplerConfig | None = None,
    rng: random.Random | None = None,
) -> Hypergraph:
    """One draw from the lazy switching walk started at the seed graph."""
    config = config or SamplerConfig(method="mcmc")
    rng = rng or seeded_rng(config.seed, "mcmc")
    g = regular_seed_graph(n, r, d)
    steps = config.burn_in if config.burn_in is not None else 20 * n * d
    for _ in range(steps):
        g = random_switch_move(g, rng) or g
    return g


def sample_mcmc_stream(
    n: int,
    r: int,
    d: int,
    count: int,
    config: SamplerConfig | None = None,
    rng: random.Random | None = None,
) -> Iterator[Hypergraph]:
    """Yield `count` draws from one switching chain, thinned to spread the
    correlation; far cheaper than independent chains when many samples are
    needed."""
    config = config or SamplerConfig(method="mcmc")
    rng = rng or seeded_rng(config.seed, "mcmc-stream")
    g = regular_seed_graph(n, r, d)
    burn = config.burn_in if config.burn_in is not None else 20 * n * d
    thin = config.thin if config.thin is not None else max(1, n * d)
    for _ in range(burn):
        g = random_switch_move(g, rng) or g
    for _ in range(count):
        for _ in range(thin):
            g = random_switch_move(g, rng) or g
        yield g


_ENUM_CACHE: dict[tuple[int, int, int], list[Hypergraph]] = {}


def _enumerated(n: int, r: int, d: int, node_budget: int = 5 * 10**6):
    key = (n, r, d)
    if key not in _ENUM_CACHE:
        _ENUM_CACHE[key] = enumerate_regular(n, r, d, node_budget=node_budget)
    return _ENUM_CACHE[key]


def sample_regular(
    n: int,
    r: int,
    d: int,
    config: SamplerConfig | None = None,
    rng: random.Random | None = None,
) -> Hypergraph:
    """Uniform sample dispatched on config.method."""
    config = config or SamplerConfig()
    rng = rng or seeded_rng(config.seed, "sample")
    if config.method == "pairing":
        return sample_pairing(n, r, d, rng, config.rejection_cap)
    if config.method == "mcmc":
        return sample_mcmc(n, r, d, config, rng)
    if config.method == "enumerate":
        graphs = _enumerated(n, r, d)
        if not graphs:
            raise EmptyClassError(f"no {d}-regular {r}-graph on {n} vertices")
        return rng.choice(graphs)
    raise ValueError(f"unknown method {config.method!r}")


def _normalize_conditions(n, r, forced, forbidden):
    forced = frozenset(edge_key(e, r) for e in forced)
    forbidden = frozenset(edge_key(e, r) for e in forbidden)
    for e in forced | forbidden:
        if e[0] < 0 or e[-1] >= n:
            raise HypergraphError(f"conditioned edge {e} not within 0..{n - 1}")
    if forced & forbidden:
        raise HypergraphError("forced and forbidden edge sets overlap")
    return forced, forbidden


def sample_conditional(
    n: int,
    r: int,
    d: int,
    forced: Iterable[Iterable[int]],
    forbidden: Iterable[Iterable[int]],
    config: SamplerConfig | None = None,
    rng: random.Random | None = None,
) -> Hypergraph:
    """Uniform over the regular graphs containing every forced edge and no
    forbidden edge, by rejection from the unconditional sampler."""
    config = config or SamplerConfig()
    rng = rng or seeded_rng(config.seed, "conditional")
    forced, forbidden = _normalize_conditions(n, r, forced, forbidden)
    degree: dict[int, int] = {}
    for e in forced:
        for v in e:
            degree[v] = degree.get(v, 0) + 1
    if degree and max(degree.values()) > d:
        raise InfeasibleError("forced edges exceed the degree bound")
    if config.method == "enumerate":
        graphs = [
            g
            for g in _enumerated(n, r, d)
            if all(e in g for e in forced) and not any(e in g for e in forbidden)
        ]
        if not graphs:
            raise EmptyClassError("conditioned class is empty")
        return rng.choice(graphs)
    for _ in range(config.rejection_cap):
        g = sample_regular(n, r, d, config, rng)
        if all(e in g for e in forced) and not any(e in g for e in forbidden):
            return g
    # distinguish an unlucky run from an impossible condition when the
    # instance is small enough to enumerate
    try:
        graphs = _enumerated(n, r, d, node_budget=2 * 10**6)
    except TooLargeError:
        pass
    else:
        if not any(
            all(e in g for e in forced) and not any(e in g for e in forbidden)
            for g in graphs
        ):
            raise EmptyClassError("conditioned class is empty")
    raise RejectionCapError(
        f"no accepted sample after {config.rejection_cap} attempts"
    )


# ----------------------------------------------------------------------
# trivial direct samplers, kept for comparison experiments


def sample_binomial(n: int, r: int, p: float, rng: random.Random | None = None) -> Hypergraph:
    """Each of the C(n, r) possible edges included independently with
    probability p."""
    if not 0.0 <= p <= 1.0:
        raise HypergraphError(f"edge probability {p} outside [0, 1]")
    rng = rng or seeded_rng("binomial", n, r, p)
    edges = [e for e in itertools.combinations(range(n), r) if rng.random() < p]
    return Hypergraph(n, r, edges)


def sample_fixed_edges(n: int, r: int, m: int, rng: random.Random | None = None) -> Hypergraph:
    """Uniform hypergraph with exactly m edges."""
    total = math.comb(n, r)
    if not 0 <= m <= total:
        raise HypergraphError(f"edge count {m} outside 0..{total}")
    rng = rng or seeded_rng("fixed-edges", n, r, m)
    edges = rng.sample(list(itertools.combinations(range(n), r)), m)
    return Hypergraph(n, r, edges)


# ----------------------------------------------------------------------
# closed forms


def theoretical_edge_probability(n: int, r: int, d: int) -> Fraction:
    """Exact unconditional edge probability (nd/r) / C(n, r).

    By vertex symmetry every r-set is equally likely to be an edge, and a
    d-regular r-graph has exactly nd/r edges.
    """
    if not regular_class_feasible(n, r, d):
        raise InfeasibleError(f"no {d}-regular {r}-graph on {n} vertices")
    return Fraction(n * d, r) / math.comb(n, r)


def exact_conditional_edge_probability(
    n: int,
    r: int,
    d: int,
    target: Iterable[int],
    forced: Iterable[Iterable[int]] = (),
    forbidden: Iterable[Iterable[int]] = (),
) -> Fraction:
    """Edge probability within a conditioned class, by full enumeration."""
    target = edge_key(target, r)
    forced, forbidden = _normalize_conditions(n, r, forced, forbidden)
    matching = [
        g
        for g in _enumerated(n, r, d)
        if all(e in g for e in forced) and not any(e in g for e in forbidden)
    ]
    if not matching:
        raise EmptyClassError("conditioned class is empty")
    return Fraction(sum(1 for g in matching if target in g), len(matching))


@dataclass
class EdgeProbabilityEstimate:
    n: int
    r: int
    d: int
    trials: int
    estimate: float
    stderr: float
    formula_value: float  # (r-1)! d / n^(r-1)
    relative_gap: float


def estimate_edge_probability(
    n: int,
    r: int,
    d: int,
    target: Iterable[int],
    forced: Iterable[Iterable[int]] = (),
    forbidden: Iterable[Iterable[int]] = (),
    trials: int = 10_000,
    rng: random.Random | None = None,
    config: SamplerConfig | None = None,
) -> EdgeProbabilityEstimate:
    """Monte-Carlo conditional edge probability with binomial standard error.

    Also reports the first-order formula value (r-1)! * d / n^(r-1) and the
    estimate's relative gap against it.
    """
    config = config or SamplerConfig()
    rng = rng or seeded_rng(config.seed, "edge-probability")
    target = edge_key(target, r)
    forced, forbidden = _normalize_conditions(n, r, forced, forbidden)
    if target in forced or target in forbidden:
        raise HypergraphError("target edge must not be conditioned on")
    hits = 0
    for _ in range(trials):
        if forced or forbidden:
            g = sample_conditional(n, r, d, forced, forbidden, config, rng)
        else:
            g = sample_regular(n, r, d, config, rng)
        if target in g:
            hits += 1
    estimate = hits / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    formula = math.factorial(r - 1) * d / n ** (r - 1)
    return EdgeProbabilityEstimate(
        n=n,
        r=r,
        d=d,
        trials=trials,
        estimate=estimate,
        stderr=stderr,
        formula_value=formula,
        relative_gap=(estimate - formula) / formula,
    )


@dataclass
class AsymptoticParams:
    """First-order model parameters for an (n, r, d) regime.

    edge_probability is the usual first-order value (r-1)! d / n^(r-1);
    edge_probability_exact is the symmetry-exact (nd/r) / C(n, r).  The
    sandwich_* fields describe the binomial comparison regime: margin
    delta, its reduced edge probability p = (1-delta) d / C(n-1, r-1) and
    reduced edge count m = (1-delta) nd / r; `applicable` records whether
    the margin stayed below 1.
    """

    n: int
    r: int
    d: int
    edge_probability: float
    edge_probability_exact: float
    error_term: float  # 1/n + 1/d + d/n^(r-1)
    sandwich_constant: float
    sandwich_margin: float
    sandwich_edge_probability: float
    sandwich_edge_count: float
    applicable: bool


def asymptotic_params(
    n: int, r: int, d: int, sandwich_constant: float = 1.0
) -> AsymptoticParams:
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    p = math.factorial(r - 1) * d / n ** (r - 1)
    p_exact = (n * d / r) / math.comb(n, r)
    error = 1.0 / n + 1.0 / d + d / n ** (r - 1)
    margin = sandwich_constant * (
        (d / n ** (r - 1) + math.log(n) / d) ** (1.0 / 3.0) + 1.0 / n
    )
    return AsymptoticParams(
        n=n,
        r=r,
        d=d,
        edge_probability=p,
        edge_probability_exact=p_exact,
        error_term=error,
        sandwich_constant=sandwich_constant,
        sandwich_margin=margin,
        sandwich_edge_probability=(1.0 - margin) * d / math.comb(n - 1, r - 1),
        sandwich_edge_count=(1.0 - margin) * n * d / r,
        applicable=margin < 1.0,
    )
