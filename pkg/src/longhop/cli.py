"""Command-line front end.

Subcommands: ``analytic``, ``simulate``, ``experiment``, ``compare``.  CSV goes
to stdout (or ``--out``); the resolved configuration is logged to stderr.

Exit codes: 0 ok, 1 comparison failure, 2 usage error, 3 analytic
non-termination.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

from . import analytics
from .core import Scenario, decision_family, scenario_positions
from .experiment import COLUMNS as EXPERIMENT_COLUMNS
from .experiment import TABLE_D, TABLE_M, TABLE_N, TABLE_R, ExperimentSpec, run_experiment
from .montecarlo import (DEFAULT_MAX_ROUNDS, MULTI_PASS, ONE_PASS, FixedPlacement,
                         RandomPlacement, SimConfig, run_trials)
from .chainsim import EQUALLY_SPACED, RANDOM

log = logging.getLogger("longhop.cli")

EXIT_OK, EXIT_COMPARE_FAILED, EXIT_USAGE, EXIT_NONTERMINATING = 0, 1, 2, 3

SIMULATE_COLUMNS = ("mode", "g", "n", "trials", "seed", "mean_progress", "std_error",
                    "mean_rounds", "truncated_count")
ANALYTIC_COLUMNS = ("mode", "g", "n", "positions", "method", "value", "std_error")
COMPARE_COLUMNS = ("mode", "g", "n", "positions", "trials", "seed", "analytic", "source",
                   "empirical", "std_error", "z", "threshold", "pass")


class UsageError(Exception):
    pass


def fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.10g}"
    return str(value)


def write_csv(columns, rows, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    text = buf.getvalue()
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_list(cast):
    def parse(text):
        try:
            values = tuple(cast(v) for v in text.split(",") if v.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
        if not values:
            raise argparse.ArgumentTypeError("list must be nonempty")
        return values
    return parse


def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_hop_args(p):
    p.add_argument("--mode", choices=(ONE_PASS, MULTI_PASS), default=ONE_PASS)
    p.add_argument("--g", default="uniform",
                   help="uniform, power, power-n, linear, hybrid, constant:P, power:K, linear:D, hybrid:P")
    p.add_argument("--n", type=_positive_int, required=True, help="number of contending nodes")
    where = p.add_mutually_exclusive_group()
    where.add_argument("--scenario", choices=[s.value for s in Scenario])
    where.add_argument("--positions", choices=("random-uniform",))
    where.add_argument("--random", action="store_true", help="same as --positions random-uniform")
    p.add_argument("--quad", choices=("simpson", "gauss-legendre"), default="simpson")


def _add_sim_args(p):
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--max-rounds", type=_positive_int, default=DEFAULT_MAX_ROUNDS)
    p.add_argument("--workers", type=_positive_int, default=1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", help="suppress the config log line")
    parser = argparse.ArgumentParser(prog="longhop", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", parents=[common], help="exact, quadrature and closed-form expected progress")
    _add_hop_args(p)
    p.add_argument("--out")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate of expected progress")
    _add_hop_args(p)
    _add_sim_args(p)
    p.add_argument("--fail-on-nonterminating", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("experiment", parents=[common], help="line-network relay sweep")
    p.add_argument("--N", type=_csv_list(int), default=TABLE_N)
    p.add_argument("--d", type=_csv_list(float), default=TABLE_D)
    p.add_argument("--m", type=_csv_list(float), default=TABLE_M)
    p.add_argument("--r", type=float, default=TABLE_R)
    p.add_argument("--trials", type=_positive_int, default=500)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--algorithm", choices=(ONE_PASS, MULTI_PASS), default=ONE_PASS)
    p.add_argument("--g", default="power", help="family resolved against the density N/d*r")
    p.add_argument("--placement", choices=(RANDOM, EQUALLY_SPACED), default=RANDOM)
    p.add_argument("--tx-power", type=float, default=-5.0)
    p.add_argument("--jitter", type=float, default=0.1)
    p.add_argument("--bind-m-to-tx-power", action="store_true")
    p.add_argument("--exclude-tail", action="store_true")
    p.add_argument("--max-rounds", type=_positive_int, default=DEFAULT_MAX_ROUNDS)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("compare", parents=[common], help="z-score of simulation against the analytic value")
    _add_hop_args(p)
    _add_sim_args(p)
    p.add_argument("--threshold", type=float, default=4.0)
    p.add_argument("--expect", type=float, help="override the analytic reference value")
    p.add_argument("--out")
    return parser


def _placement_label(args):
    return args.scenario if args.scenario else "random-uniform"


def _family(args):
    try:
        return decision_family(args.g, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _closed_form(mode, family, n):
    name, _, arg = family.partition(":")
    if mode == ONE_PASS:
        if family in ("uniform", "power"):
            return analytics.closed_form_one_pass(family, n)
        return None
    if name == "hybrid":
        return analytics.closed_form_multipass("hybrid", n)
    if (family == "uniform" and n >= 2) or (name == "constant" and arg and 0 < float(arg) < 1):
        return analytics.closed_form_multipass("constant", n)
    return None


def analytic_rows(args):
    """Rows of (method, value, std_error) for the requested configuration."""
    g = _family(args)
    common = {"mode": args.mode, "g": args.g, "n": args.n, "positions": _placement_label(args)}
    rows = []
    if args.scenario:
        xs = scenario_positions(args.scenario, args.n)
        if args.mode == ONE_PASS:
            value = analytics.expected_hop_one_pass_fixed(g, xs)
        else:
            value = analytics.expected_hop_multipass(g, xs)
        rows.append({**common, "method": "exact", "value": value, "std_error": math.nan})
        return rows
    quad = analytics.QuadratureSpec(method=args.quad)
    if args.mode == ONE_PASS:
        value = analytics.expected_hop_one_pass_random(g, args.n, quad=quad)
        rows.append({**common, "method": "quadrature", "value": value, "std_error": math.nan})
    else:
        value = analytics.expected_hop_multipass_random(g, args.n, quad=quad)
        if isinstance(value, float):
            rows.append({**common, "method": "quadrature", "value": value, "std_error": math.nan})
        else:
            rows.append({**common, "method": "monte-carlo", "value": value.mean,
                         "std_error": value.std_error})
    closed = _closed_form(args.mode, args.g, args.n)
    if closed is not None:
        rows.append({**common, "method": "closed-form", "value": closed, "std_error": math.nan})
    return rows


def cmd_analytic(args):
    write_csv(ANALYTIC_COLUMNS, analytic_rows(args), args.out)
    return EXIT_OK


def _simulate(args, g):
    source = (FixedPlacement(scenario_positions(args.scenario, args.n)) if args.scenario
              else RandomPlacement(args.n, 1.0))
    cfg = SimConfig(trials=args.trials, seed=args.seed, max_rounds=args.max_rounds,
                    workers=args.workers)
    return run_trials(args.mode, g, source, cfg)


def cmd_simulate(args):
    g = _family(args)
    if args.fail_on_nonterminating and args.mode == MULTI_PASS:
        xs = scenario_positions(args.scenario, args.n) if args.scenario else None
        if analytics.multipass_nonterminating(g, args.n, xs):
            print("error: multi-pass contention can never produce a unique winner", file=sys.stderr)
            return EXIT_NONTERMINATING
    batch = _simulate(args, g)
    est = batch.progress_estimate()
    write_csv(SIMULATE_COLUMNS, [{
        "mode": args.mode, "g": args.g, "n": args.n, "trials": args.trials, "seed": args.seed,
        "mean_progress": est.mean, "std_error": est.std_error,
        "mean_rounds": batch.mean_rounds(), "truncated_count": batch.truncated_count,
    }], args.out)
    return EXIT_OK


def cmd_experiment(args):
    try:
        spec = ExperimentSpec(N_values=args.N, d_values=args.d, m_values=args.m, r=args.r,
                              trials=args.trials, seed=args.seed, algorithm=args.algorithm,
                              g_family=args.g, placement=args.placement, tx_power_dbm=args.tx_power,
                              power_jitter=args.jitter, bind_m_to_tx_power=args.bind_m_to_tx_power,
                              exclude_tail=args.exclude_tail, max_rounds=args.max_rounds,
                              workers=args.workers)
        decision_family(spec.g_family, 1.0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    log.info("experiment spec: %s", json.dumps(spec.to_dict(), sort_keys=True))
    write_csv(EXPERIMENT_COLUMNS, run_experiment(spec), args.out)
    return EXIT_OK


def cmd_compare(args):
    g = _family(args)
    if args.expect is not None:
        reference, source = args.expect, "expect"
    else:
        if (args.mode == MULTI_PASS and not args.scenario
                and not analytics.multipass_random_is_structured(g)):
            raise UsageError("no analytic counterpart for this configuration")
        best = analytic_rows(args)[-1]
        reference, source = best["value"], best["method"]
    est = _simulate(args, g).progress_estimate()
    z = est.z_score(reference)
    ok = abs(z) <= args.threshold
    write_csv(COMPARE_COLUMNS, [{
        "mode": args.mode, "g": args.g, "n": args.n, "positions": _placement_label(args),
        "trials": args.trials, "seed": args.seed, "analytic": reference, "source": source,
        "empirical": est.mean, "std_error": est.std_error, "z": z,
        "threshold": args.threshold, "pass": ok,
    }], args.out)
    return EXIT_OK if ok else EXIT_COMPARE_FAILED


COMMANDS = {"analytic": cmd_analytic, "simulate": cmd_simulate,
            "experiment": cmd_experiment, "compare": cmd_compare}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    resolved = {k: v for k, v in sorted(vars(args).items())}
    log.info("resolved config: %s", json.dumps(resolved, sort_keys=True, default=str))
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (analytics.NonTerminating, analytics.Truncated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONTERMINATING


if __name__ == "__main__":
    sys.exit(main())
