"""Experiment runner: deterministic seeding, CSV/JSON rows, SVG plots.

Every number in a CSV row comes straight from a library call; the CLI only
formats.  Fixed master seed means byte-identical CSV output.  JSON output
wraps the same rows in an ExperimentRecord envelope that additionally
carries wall time (the one deliberately non-deterministic field).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import census, sampling, spanning, testers
from .core import Hypergraph, HypergraphError, TooLargeError, parse, serialize
from .census import Pattern
from .sampling import SamplerConfig, seeded_rng

__all__ = ["main", "parse_pattern", "ExperimentRecord"]

_VERSION = "0.1.0"


@dataclass
class ExperimentRecord:
    experiment: str
    params: dict
    seed: int
    trials: int | None
    header: list
    rows: list
    version: str
    wall_time_s: float


# ----------------------------------------------------------------------
# argument helpers


def parse_edge(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"edge must be comma-separated ints: {text!r}")


def parse_int_range(text: str) -> list[int]:
    """'2:10' inclusive, '0:280:40' with step, or '0,40,80' explicit."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        return list(range(lo, hi + 1, step))
    return [int(tok) for tok in text.split(",")]


_PATTERN_FORMS = [
    (r"triangle", lambda m: census.triangle()),
    (r"edge(?:-r(\d+))?", lambda m: census.single_edge(int(m.group(1) or 2))),
    (
        r"(?:k|complete-)(\d+)(?:-r(\d+))?",
        lambda m: census.complete_pattern(int(m.group(1)), int(m.group(2) or 2)),
    ),
    (
        r"(?:c|cycle-)(\d+)",
        lambda m: Pattern(
            spanning.overlap_cycle_pattern(int(m.group(1)), 2, 1),
            name=f"cycle-{m.group(1)}",
        ),
    ),
    (
        r"loose-cycle-(\d+)-r(\d+)",
        lambda m: Pattern(
            spanning.overlap_cycle_pattern(int(m.group(1)), int(m.group(2)), 1),
            name=f"loose-cycle-{m.group(1)}-r{m.group(2)}",
        ),
    ),
    (
        r"tight-cycle-(\d+)-r(\d+)",
        lambda m: Pattern(
            spanning.overlap_cycle_pattern(
                int(m.group(1)), int(m.group(2)), int(m.group(2)) - 1
            ),
            name=f"tight-cycle-{m.group(1)}-r{m.group(2)}",
        ),
    ),
    (
        r"loose-path-(\d+)-r(\d+)",
        lambda m: census.loose_path(int(m.group(1)), int(m.group(2))),
    ),
    (
        r"matching-(\d+)(?:-r(\d+))?",
        lambda m: census.matching_pattern(int(m.group(1)), int(m.group(2) or 2)),
    ),
    (
        r"lattice-(\d+)",
        lambda m: Pattern(
            spanning.lattice_pattern(int(m.group(1))), name=f"lattice-{m.group(1)}"
        ),
    ),
]


def parse_pattern(text: str) -> Pattern:
    """Named pattern ('triangle', 'c4', 'k4-r3', 'loose-cycle-6-r3', ...)
    or 'file:PATH' pointing at a hypergraph text file."""
    spec = text.strip()
    if spec.startswith("file:"):
        path = Path(spec[5:])
        return Pattern(parse(path.read_text()), name=path.stem)
    lowered = spec.lower()
    for regex, build in _PATTERN_FORMS:
        m = re.fullmatch(regex, lowered)
        if m:
            return build(m)
    raise argparse.ArgumentTypeError(f"unknown pattern {text!r}")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_output(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit_rows(args, experiment: str, params: dict, header: list, rows: list, seed: int,
               trials: int | None, started: float) -> None:
    if getattr(args, "format", "csv") == "json":
        record = ExperimentRecord(
            experiment=experiment,
            params=params,
            seed=seed,
            trials=trials,
            header=header,
            rows=[[_fmt(v) for v in row] for row in rows],
            version=_VERSION,
            wall_time_s=time.monotonic() - started,
        )
        _write_output(json.dumps(asdict(record), sort_keys=True, indent=2) + "\n", args.out)
        return
    buf = []
    buf.append(",".join(header))
    for row in rows:
        buf.append(",".join(_fmt(v) for v in row))
    _write_output("\n".join(buf) + "\n", args.out)


def _load_instance(args) -> Hypergraph:
    if getattr(args, "input", None):
        return parse(Path(args.input).read_text())
    config = SamplerConfig(method=args.method, seed=args.seed)
    rng = seeded_rng(args.seed, "instance")
    return sampling.sample_regular(args.n, args.r, args.d, config, rng)


# ----------------------------------------------------------------------
# subcommands


def _cmd_sample(args) -> int:
    config = SamplerConfig(method=args.method, seed=args.seed, burn_in=args.burnin)
    rng = seeded_rng(args.seed, "sample")
    if args.forced or args.forbidden:
        g = sampling.sample_conditional(
            args.n, args.r, args.d, args.forced, args.forbidden, config, rng
        )
    else:
        g = sampling.sample_regular(args.n, args.r, args.d, config, rng)
    _write_output(serialize(g), args.out)
    return 0


def _cmd_enumerate(args) -> int:
    graphs = sampling.enumerate_regular(args.n, args.r, args.d, node_budget=args.budget)
    _emit_rows(
        args,
        "enumerate",
        {"n": args.n, "r": args.r, "d": args.d},
        ["n", "r", "d", "count"],
        [[args.n, args.r, args.d, len(graphs)]],
        seed=0,
        trials=None,
        started=time.monotonic(),
    )
    return 0


def _condition_sweep(n: int, r: int, target: tuple[int, ...]):
    """Deterministic forced/forbidden sets of sizes 0..2 for the sweep:
    forced edges are vertex-disjoint from the target and each other,
    forbidden edges overlap the target's complement arbitrarily."""
    import itertools

    pool = [v for v in range(n) if v not in target]
    forced_pool = []
    for i in range(2):
        chunk = pool[i * r : (i + 1) * r]
        if len(chunk) == r:
            forced_pool.append(tuple(chunk))
    taken = {target, *forced_pool}
    forbidden_pool = []
    for combo in itertools.combinations(range(n), r):
        if combo not in taken:
            forbidden_pool.append(combo)
            taken.add(combo)
        if len(forbidden_pool) == 2:
            break
    for nf in range(len(forced_pool) + 1):
        for nb in range(len(forbidden_pool) + 1):
            yield forced_pool[:nf], forbidden_pool[:nb]


def _cmd_verify_correlation(args) -> int:
    started = time.monotonic()
    target = args.target or tuple(range(args.r))
    combos = (
        list(_condition_sweep(args.n, args.r, target))
        if args.sweep
        else [(tuple(args.forced), tuple(args.forbidden))]
    )
    config = SamplerConfig(method=args.method, seed=args.seed)
    header = [
        "n", "r", "d", "method", "seed", "trials", "target",
        "estimate", "stderr", "formula_value", "relative_gap",
    ]
    rows = []
    for forced, forbidden in combos:
        rng = seeded_rng(args.seed, "verify", forced, forbidden)
        try:
            est = sampling.estimate_edge_probability(
                args.n, args.r, args.d, target,
                forced, forbidden, args.trials, rng, config,
            )
        except (sampling.EmptyClassError, HypergraphError) as exc:
            print(f"skipping H={forced} H'={forbidden}: {exc}", file=sys.stderr)
            continue
        rows.append([
            args.n, args.r, args.d, args.method, args.seed, args.trials,
            "-".join(str(v) for v in target),
            est.estimate, est.stderr, est.formula_value, est.relative_gap,
        ])
    _emit_rows(
        args, "verify-correlation",
        {"n": args.n, "r": args.r, "d": args.d, "method": args.method,
         "sweep": bool(args.sweep)},
        header, rows, seed=args.seed, trials=args.trials, started=started,
    )
    return 0


def _cmd_census(args) -> int:
    g = _load_instance(args)
    pattern = args.pattern
    copies = census.count_copies(g, pattern)
    conflict = census.conflict_graph(g, pattern)
    greedy = census.greedy_packing(g, pattern, conflict=conflict)
    try:
        exact = census.exact_packing(g, pattern, cap=args.cap, conflict=conflict)
    except TooLargeError:
        exact = "capped"
    try:
        deletion = census.min_deletion_distance(g, pattern, cap=args.cap)
    except TooLargeError:
        deletion = "capped"
    eps_far, eps_exact = census.farness(g, pattern, cap=args.cap)
    report = {
        "pattern": pattern.name,
        "n": g.n,
        "r": g.r,
        "edges": len(g),
        "copies": copies,
        "automorphisms": pattern.automorphisms,
        "conflict_nodes": conflict.node_count,
        "conflict_edges": conflict.edge_count,
        "turan_bound": census.turan_bound(conflict.node_count, conflict.edge_count),
        "greedy_packing": len(greedy),
        "exact_packing": exact,
        "min_deletion_distance": deletion,
        "epsilon_far": float(eps_far),
        "epsilon_far_exact": eps_exact,
    }
    _write_output(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_pack(args) -> int:
    started = time.monotonic()
    g = _load_instance(args)
    pattern = args.pattern
    conflict = census.conflict_graph(g, pattern)
    greedy = census.greedy_packing(g, pattern, conflict=conflict)
    try:
        exact = census.exact_packing(g, pattern, cap=args.cap, conflict=conflict)
    except TooLargeError:
        exact = "capped"
    try:
        deletion = census.min_deletion_distance(g, pattern, cap=args.cap)
    except TooLargeError:
        deletion = "capped"
    eps_far, _ = census.farness(g, pattern, cap=args.cap)
    header = [
        "pattern", "n", "r", "edges", "copies", "conflict_edges", "turan_bound",
        "greedy_packing", "exact_packing", "min_deletion_distance", "epsilon_far",
    ]
    rows = [[
        pattern.name, g.n, g.r, len(g), conflict.node_count, conflict.edge_count,
        census.turan_bound(conflict.node_count, conflict.edge_count),
        len(greedy), exact, deletion, float(eps_far),
    ]]
    _emit_rows(
        args, "pack", {"pattern": pattern.name}, header, rows,
        seed=getattr(args, "seed", 0), trials=None, started=started,
    )
    return 0


def _cmd_hamilton(args) -> int:
    started = time.monotonic()
    header = ["n", "r", "ell", "d", "trials", "frequency", "frequency_smoothed"]
    frequencies = []
    ds = []
    for d in args.d_sweep:
        if not sampling.regular_class_feasible(args.n, args.r, d):
            print(f"skipping infeasible d={d}", file=sys.stderr)
            continue
        config = SamplerConfig(method="mcmc", seed=args.seed)
        rng = seeded_rng(args.seed, "hamilton", d)
        hits = 0
        for g in sampling.sample_mcmc_stream(args.n, args.r, d, args.trials, config, rng):
            if spanning.has_hamilton(g, args.ell, node_budget=args.budget):
                hits += 1
        ds.append(d)
        frequencies.append(hits / args.trials)
    smoothed = testers.median_smooth3(frequencies)
    rows = [
        [args.n, args.r, args.ell, d, args.trials, freq, sm]
        for d, freq, sm in zip(ds, frequencies, smoothed)
    ]
    _emit_rows(
        args, "hamilton",
        {"n": args.n, "r": args.r, "ell": args.ell},
        header, rows, seed=args.seed, trials=args.trials, started=started,
    )
    return 0


def _cmd_analyze_pattern(args) -> int:
    pattern = args.pattern
    analysis = spanning.analyze_pattern(pattern)
    report = {
        "pattern": pattern.name,
        "r": pattern.r,
        "vertex_count": analysis.vertex_count,
        "edge_count": analysis.edge_count,
        "automorphisms": pattern.automorphisms,
        "diameter": analysis.diameter,
        "outer_layer_edge_free": analysis.outer_layer_edge_free,
        "overlap_index": analysis.overlap_index,
        "density_ratio": (
            None if analysis.density_ratio is None else str(analysis.density_ratio)
        ),
        "extremal_exponent": (
            None
            if analysis.density_ratio is None
            else str(pattern.r - analysis.density_ratio)
        ),
        "layers": {
            "-".join(str(v) for v in e): [sorted(layer) for layer in layers]
            for e, layers in sorted(analysis.layers.items())
        },
    }
    _write_output(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _tester_call(name, oracle, pattern, eps, d, c1, c, rng):
    if name == "bfs":
        return testers.bfs_tester(oracle, pattern, eps, c1=c1, rng=rng)
    if name == "edge-rooted":
        return testers.edge_rooted_bfs_tester(oracle, pattern, eps, c1=c1, rng=rng)
    if name == "canonical":
        return testers.canonical_tester(oracle, pattern, eps, d, c=c, rng=rng)
    raise ValueError(f"unknown tester {name!r}")


def _build_test_instance(args, trial: int) -> Hypergraph:
    rng = seeded_rng(args.seed, "instance", trial)
    kind = args.instance
    if kind == "blocked":
        return testers.build_blocked_instance(
            args.n, args.d, args.pattern, args.eta, rng, method=args.method
        )
    if kind in ("free-host", "clique"):
        return testers.build_lowerbound_family(args.n, args.d, args.pattern, kind, rng)
    if kind.startswith("file:"):
        return parse(Path(kind[5:]).read_text())
    raise ValueError(f"unknown instance kind {kind!r}")


def _cmd_test(args) -> int:
    started = time.monotonic()
    rejects = 0
    vset_total = 0
    nbr_total = 0
    eps_total = 0.0
    for trial in range(args.trials):
        instance = _build_test_instance(args, trial)
        if args.eps is not None:
            eps = args.eps
        else:
            measured, _ = census.farness(instance, args.pattern, cap=args.cap)
            eps = float(measured) if measured > 0 else 0.5
        eps_total += eps
        oracle = testers.Oracle(
            instance, seed=f"{args.seed}|oracle|{trial}", budget=args.budget
        )
        rng = seeded_rng(args.seed, "tester", trial)
        try:
            verdict = _tester_call(
                args.tester, oracle, args.pattern, eps, args.d, args.c1, args.c, rng
            )
            if not verdict.accept:
                rejects += 1
        except testers.QueryBudgetExceededError:
            pass
        vset_total += oracle.vertex_set_queries
        nbr_total += oracle.neighbour_queries
    header = [
        "tester", "n", "r", "d", "pattern", "eps_measured", "trials",
        "reject_rate", "mean_vset_queries", "mean_nbr_queries", "budget",
    ]
    rows = [[
        args.tester, args.n, args.pattern.r, args.d, args.pattern.name,
        eps_total / args.trials, args.trials, rejects / args.trials,
        vset_total / args.trials, nbr_total / args.trials, args.budget,
    ]]
    _emit_rows(
        args, "test",
        {"tester": args.tester, "instance": args.instance, "pattern": args.pattern.name},
        header, rows, seed=args.seed, trials=args.trials, started=started,
    )
    return 0


def _cmd_lowerbound(args) -> int:
    started = time.monotonic()
    params = testers.blocked_family_params(args.n, args.d, args.pattern, args.eta)
    sweep = testers.simple_history_experiment(
        args.n, args.d, args.pattern, args.budgets, args.trials,
        eta=args.eta, seed=args.seed, method=args.method,
    )
    smoothed = testers.median_smooth3([row["fraction"] for row in sweep])
    header = [
        "n", "r", "d", "pattern", "eta", "saturated_block_size", "block_count",
        "budget", "fraction", "fraction_smoothed",
    ]
    rows = [
        [
            args.n, args.pattern.r, args.d, args.pattern.name, args.eta,
            params.saturated_size, params.block_count,
            row["budget"], row["fraction"], sm,
        ]
        for row, sm in zip(sweep, smoothed)
    ]
    _emit_rows(
        args, "lowerbound",
        {"pattern": args.pattern.name, "eta": args.eta,
         "block_sizes": list(params.block_sizes)},
        header, rows, seed=args.seed, trials=args.trials, started=started,
    )
    return 0


def _cmd_report(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(args.input, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise HypergraphError(f"no data rows in {args.input}")
    for col in (args.x, args.y):
        if col not in rows[0]:
            raise HypergraphError(f"column {col!r} not in {list(rows[0])}")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if args.group and args.group in rows[0]:
        keys = sorted({row[args.group] for row in rows})
        groups = [(f"{args.group}={k}", [r for r in rows if r[args.group] == k]) for k in keys]
    else:
        groups = [(args.y, rows)]
    for label, data in groups:
        pts = sorted((float(r[args.x]), float(r[args.y])) for r in data)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    ax.set_xlabel(args.x)
    ax.set_ylabel(args.y)
    if args.title:
        ax.set_title(args.title)
    if len(groups) > 1:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out, format="svg")
    plt.close(fig)
    return 0


# ----------------------------------------------------------------------
# parser


def _add_common(p, *, seed=True, fmt=True, out=True):
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if fmt:
        p.add_argument("--format", choices=["csv", "json"], default="csv")
    if out:
        p.add_argument("--out", default=None, help="output path, default stdout")


def _add_instance_args(p):
    p.add_argument("--input", default=None, help="hypergraph text file")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--method", choices=["pairing", "mcmc", "enumerate"], default="pairing")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hyperreg",
        description="experiments on random d-regular r-uniform hypergraphs",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="emit one sampled hypergraph as text")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--method", choices=["pairing", "mcmc", "enumerate"], default="pairing")
    p.add_argument("--burnin", type=int, default=None)
    p.add_argument("--forced", type=parse_edge, action="append", default=[])
    p.add_argument("--forbidden", type=parse_edge, action="append", default=[])
    _add_common(p, fmt=False)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("enumerate", help="count the labelled regular class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**8)
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser(
        "verify-correlation",
        help="Monte-Carlo edge probability against the closed forms",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--method", choices=["pairing", "mcmc", "enumerate"], default="pairing")
    p.add_argument("--target", type=parse_edge, default=None)
    p.add_argument("--forced", type=parse_edge, action="append", default=[])
    p.add_argument("--forbidden", type=parse_edge, action="append", default=[])
    p.add_argument("--sweep", action="store_true",
                   help="sweep forced/forbidden sizes 0..2 instead of one row")
    _add_common(p)
    p.set_defaults(func=_cmd_verify_correlation)

    p = sub.add_parser("census", help="pattern census report (JSON)")
    _add_instance_args(p)
    p.add_argument("--pattern", type=parse_pattern, required=True)
    p.add_argument("--cap", type=int, default=24)
    _add_common(p, fmt=False)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("pack", help="packing and deletion-distance row")
    _add_instance_args(p)
    p.add_argument("--pattern", type=parse_pattern, required=True)
    p.add_argument("--cap", type=int, default=24)
    _add_common(p)
    p.set_defaults(func=_cmd_pack)

    p = sub.add_parser("hamilton", help="spanning-cycle existence sweep over d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--d-sweep", dest="d_sweep", type=parse_int_range, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--budget", type=int, default=10**7)
    _add_common(p)
    p.set_defaults(func=_cmd_hamilton)

    p = sub.add_parser("analyze-pattern", help="pattern structure report (JSON)")
    p.add_argument("--pattern", type=parse_pattern, required=True)
    _add_common(p, seed=False, fmt=False)
    p.set_defaults(func=_cmd_analyze_pattern)

    p = sub.add_parser("test", help="run a freeness tester over generated instances")
    p.add_argument("--tester", choices=["bfs", "edge-rooted", "canonical"], required=True)
    p.add_argument("--pattern", type=parse_pattern, required=True)
    p.add_argument(
        "--instance", default="blocked",
        help="blocked | free-host | clique | file:PATH",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--eps", type=float, default=None,
                   help="default: measured farness of each instance")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--budget", type=int, default=None, help="oracle query budget")
    p.add_argument("--cap", type=int, default=24)
    p.add_argument("--c1", type=int, default=8)
    p.add_argument("--c", type=int, default=4)
    p.add_argument("--method", choices=["pairing", "mcmc"], default="pairing")
    _add_common(p)
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("lowerbound", help="blocked family + history simpleness sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--pattern", type=parse_pattern, required=True)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--budgets", type=parse_int_range, required=True)
    p.add_argument("--trials", type=int, default=40)
    p.add_argument("--method", choices=["pairing", "mcmc"], default="pairing")
    _add_common(p)
    p.set_defaults(func=_cmd_lowerbound)

    p = sub.add_parser("report", help="render an SVG line plot from a CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--group", default=None)
    p.add_argument("--title", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HypergraphError, RuntimeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
