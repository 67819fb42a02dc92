"""Operator command line.

Subcommands: simulate (winner-density Monte Carlo with a tolerance gate),
tournament (iterative elimination over a voter population), diff
(disagreement between two budget files), serve (the collaboration
service). Exit codes: 0 success or within tolerance, 1 tolerance failure,
2 usage or IO error.
"""

from __future__ import annotations

import argparse
import socket
import sys
from pathlib import Path

from .core.metrics import deficit, disagreement, format_ratio6, resolve_amounts
from .density.simulate import DensityRun, sample_winner_density, verify_mixture_identity
from .ingest.files import ParseError, parse_baseline, parse_budget
from .voting.population import VoterPopulation
from .voting.rounds import GROUP_SIZE, Scheme
from .voting.space import Line1D
from .voting.tournament import run_tournament

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2

DEFAULT_TOLERANCE = {"triadic": 0.02, "hotornot": 0.02, "mixture": 0.03}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="accord")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser(
        "simulate", help="sample one-round winner densities and gate on L1 fit"
    )
    simulate.add_argument("--scheme", choices=["triadic", "hotornot", "mixture"], required=True)
    simulate.add_argument("--trials", type=int, default=1_000_000)
    simulate.add_argument("--bins", type=int, default=50)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", type=Path, default=None, help="histogram table (csv)")
    simulate.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="L1 gate; defaults 0.02 (triadic/hotornot) or 0.03 (mixture)",
    )

    tournament = commands.add_parser(
        "tournament", help="run an elimination tournament over a voter population"
    )
    source = tournament.add_mutually_exclusive_group(required=True)
    source.add_argument("--population", type=Path, help="file with one position per line")
    source.add_argument("--uniform", type=int, help="draw N uniform positions")
    tournament.add_argument("--scheme", choices=["triadic", "hotornot"], default="triadic")
    tournament.add_argument("--k", type=int, default=1, help="stop when survivors <= k")
    tournament.add_argument("--seed", type=int, default=0)

    diff = commands.add_parser("diff", help="disagreement between two budget files")
    diff.add_argument("budget_a", type=Path)
    diff.add_argument("budget_b", type=Path)
    diff.add_argument("--baseline", type=Path, required=True)

    serve = commands.add_parser("serve", help="run the collaboration service")
    serve.add_argument("--config", type=Path, default=None)

    return parser


# -- simulate -----------------------------------------------------------------


def _write_table(path: Path, run: DensityRun) -> None:
    hist = run.histogram
    edges = hist.edges
    lines = ["bin_lo,bin_hi,empirical,analytic"]
    for i, (emp, ref) in enumerate(zip(hist.densities, run.reference)):
        lines.append(f"{edges[i]:.6f},{edges[i + 1]:.6f},{emp:.9f},{ref:.9f}")
    path.write_text("\n".join(lines) + "\n")


def cmd_simulate(args) -> int:
    if args.trials < 1 or args.bins < 1 or args.trials < args.bins:
        print(f"error: need trials >= bins >= 1, got trials={args.trials} bins={args.bins}",
              file=sys.stderr)
        return EXIT_USAGE
    tolerance = args.tolerance if args.tolerance is not None else DEFAULT_TOLERANCE[args.scheme]
    if args.scheme == "mixture":
        run = verify_mixture_identity(args.trials, args.bins, args.seed)
    else:
        run = sample_winner_density(Scheme(args.scheme), args.trials, args.bins, args.seed)
    if args.out is not None:
        try:
            _write_table(args.out, run)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    report = run.report
    ok = report.l1 <= tolerance
    print(f"scheme={report.scheme} trials={report.trials} bins={report.bins} seed={report.seed}")
    print(f"l1={report.l1:.6f} tolerance={tolerance:.6f} max_z={report.max_z:.3f}")
    print(
        f"mean={report.mean:.6f} (analytic {report.analytic_mean:.6f}) "
        f"variance={report.variance:.6f} (analytic {report.analytic_variance:.6f})"
    )
    print(f"result: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_TOLERANCE


# -- tournament ----------------------------------------------------------------


def _load_positions(path: Path) -> list[float]:
    positions = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            value = float(text)
        except ValueError:
            raise ParseError(f"not a position: {text!r}", lineno) from None
        if not 0.0 <= value <= 1.0:
            raise ParseError(f"position {value} outside [0, 1]", lineno)
        positions.append(value)
    return positions


def cmd_tournament(args) -> int:
    scheme = Scheme(args.scheme)
    if args.uniform is not None:
        if args.uniform < 1:
            print("error: --uniform must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        population = VoterPopulation.uniform(args.uniform, seed=args.seed)
    else:
        try:
            positions = _load_positions(args.population)
        except (OSError, ParseError) as exc:
            print(f"error: {args.population}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        population = VoterPopulation(
            space=Line1D(), positions=tuple(positions), seed=args.seed
        )
    if args.k < 1 or len(population) < max(args.k, GROUP_SIZE[scheme]):
        print(
            f"error: population of {len(population)} cannot run {scheme.value} with k={args.k}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        result = run_tournament(population, scheme, stop_count=args.k)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    def fmt(index: int) -> str:
        return f"{index}@{population.positions[index]:.6f}"

    print(f"population: {len(population)} voters ({population.space.kind}), seed={args.seed}")
    print(f"scheme: {scheme.value}, stop at {args.k}")
    for stage, survivors in enumerate(result.survivors_per_stage):
        print(f"stage {stage}: {len(survivors)} survivors: " + " ".join(map(str, survivors)))
    for number, round_ in enumerate(result.rounds, start=1):
        ballots = " ".join(f"{voter}->{choice}" for voter, choice in round_.ballots)
        print(
            f"round {number} ({round_.scheme.value}): "
            f"participants {','.join(map(str, round_.participants))} "
            f"ballots {ballots} winner {round_.winner}"
        )
    print("final winners: " + " ".join(fmt(w) for w in result.winners))
    return EXIT_OK


# -- diff ------------------------------------------------------------------------


def cmd_diff(args) -> int:
    try:
        baseline = parse_baseline(args.baseline.read_text())
        budget_a = parse_budget(args.budget_a.read_text(), baseline)
        budget_b = parse_budget(args.budget_b.read_text(), baseline)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    amounts_a = resolve_amounts(budget_a, baseline)
    amounts_b = resolve_amounts(budget_b, baseline)
    report = disagreement(amounts_a, amounts_b)

    width = max((len(c.id) for c in baseline.categories), default=8)
    print(f"{'category'.ljust(width)} {'a':>12} {'b':>12} {'delta':>12}")
    for cat in baseline.categories:
        print(
            f"{cat.id.ljust(width)} {amounts_a[cat.id]:>12} {amounts_b[cat.id]:>12} "
            f"{report.deltas[cat.id]:>12}"
        )
    print(f"deficit a: {deficit(amounts_a)}")
    print(f"deficit b: {deficit(amounts_b)}")
    print(f"disagreement: {format_ratio6(2 * report.delta_total, report.magnitude_total)}")
    print(f"display: {report.display}")
    return EXIT_OK


# -- serve ------------------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .session.config import ConfigError, load_config
    from .session.service import create_app

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    # Fail fast on an occupied port instead of letting the server loop log it.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        print(f"error: cannot listen on {config.host}:{config.port}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        probe.close()
    app = create_app(config)
    print(f"listening on http://{config.host}:{config.port} (data in {config.data_dir})", flush=True)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "simulate": cmd_simulate,
        "tournament": cmd_tournament,
        "diff": cmd_diff,
        "serve": cmd_serve,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
