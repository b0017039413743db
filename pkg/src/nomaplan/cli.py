"""Command-line front end.

Subcommands: sweep, plan, simulate, compare. Tabular output is CSV
(UTF-8, LF, shortest round-trip decimals); structured output is canonical
JSON (lexicographic keys, no insignificant whitespace) so golden fixtures
stay byte-stable. Exit codes: 0 success, 1 usage/config error, 2 runtime
or validation failure.

With --plot, a matplotlib rendering of the result is written next to the
delimited output (same stem, .png).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import configio, plots, sweep as sweep_mod
from .errors import ConfigError, NomaplanError, StabilityError
from .fbl import DispersionMode
from .planner import (
    EqualSplit,
    FixedSplit,
    OptimizedSplit,
    plan_noma,
    verify_plan,
)
from .sim import empirical_violation, simulate_queue
from .validate import validate_queue_approximation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def _split_name(policy) -> str:
    if isinstance(policy, EqualSplit):
        return "equal"
    if isinstance(policy, FixedSplit):
        return f"fixed:{policy.ratio!r}"
    if isinstance(policy, OptimizedSplit):
        return "optimized"
    return repr(policy)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nomaplan",
        description="Required-SNR planning for two-user NOMA under URLLC "
                    "latency/reliability targets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="sweep required SNR over a parameter grid")
    grp = sw.add_mutually_exclusive_group(required=True)
    grp.add_argument("--preset", choices=sorted(sweep_mod.PRESETS))
    grp.add_argument("--config", type=Path)
    sw.add_argument("--output", type=Path, default=Path("sweep.csv"))
    sw.add_argument("--oma", action="store_true",
                    help="use the orthogonal (OMA) baseline instead of NOMA")
    sw.add_argument("--mode", choices=("paper", "corrected"), default=None)
    sw.add_argument("--plot", action="store_true",
                    help="render a figure next to the CSV")

    pl = sub.add_parser("plan", help="single-point plan: required SINRs and "
                                     "transmit SNR, as canonical JSON")
    pl.add_argument("--config", type=Path, required=True)

    si = sub.add_parser("simulate", help="validate the queueing approximation "
                                         "by seeded Monte Carlo")
    si.add_argument("--config", type=Path, required=True)
    si.add_argument("--output", type=Path, default=None,
                    help="write the delay histogram CSV here")
    si.add_argument("--plot", action="store_true")

    cp = sub.add_parser("compare", help="paired NOMA vs OMA required SNR")
    grp = cp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--preset", choices=sorted(sweep_mod.PRESETS))
    grp.add_argument("--config", type=Path)
    cp.add_argument("--output", type=Path, default=Path("compare.csv"))
    cp.add_argument("--mode", choices=("paper", "corrected"), default=None)
    cp.add_argument("--plot", action="store_true")
    return parser


def _load_spec(args) -> sweep_mod.SweepSpec:
    if args.preset:
        spec = sweep_mod.preset(args.preset)
    else:
        spec = configio.load_sweep_spec(args.config)
    if args.mode is not None:
        mode = (DispersionMode.PAPER_LITERAL if args.mode == "paper"
                else DispersionMode.STANDARD)
        spec = replace(spec, mode=mode)
    if getattr(args, "oma", False):
        spec = replace(spec, oma=True)
    return spec


def _cmd_sweep(args) -> int:
    spec = _load_spec(args)
    rows = sweep_mod.run_sweep(spec)
    sweep_mod.write_sweep_csv(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output}")
    if args.plot:
        png = args.output.with_suffix(".png")
        plots.plot_sweep(rows, png, log_x=spec.spacing == "log",
                         title=args.preset or "sweep")
        print(f"wrote figure to {png}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    spec = _load_spec(args)
    rows = sweep_mod.run_compare(spec)
    sweep_mod.write_compare_csv(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output}")
    if args.plot:
        png = args.output.with_suffix(".png")
        plots.plot_compare(rows, png, log_x=spec.spacing == "log",
                           title=args.preset or "compare")
        print(f"wrote figure to {png}")
    return EXIT_OK


def _cmd_plan(args) -> int:
    cfg = configio.load_plan_config(args.config)
    plan = plan_noma(
        cfg.system, cfg.traffic, cfg.h1_sq, cfg.h2_sq, cfg.alpha1, cfg.alpha2,
        cfg.eps_d, cfg.bound, cfg.dispersion_mode, cfg.sinr_mode, cfg.split,
    )
    residuals = None
    if plan.feasible:
        residuals = verify_plan(plan, cfg.system, cfg.traffic, cfg.dispersion_mode)
    out = {
        "budget": {
            "eps_c": plan.budget.eps_c,
            "eps_d": plan.budget.eps_d,
            "eps_q": plan.budget.eps_q,
            "split": _split_name(plan.budget.split_policy),
        },
        "diagnostics": plan.diagnostics,
        "feasible": plan.feasible,
        "qos_exponent": plan.qos_exponent.theta if plan.qos_exponent else None,
        "required_rho": _finite_or_none(plan.required_rho),
        "required_rho_db": _finite_or_none(sweep_mod.snr_db(plan.required_rho))
        if plan.required_rho is not None else None,
        "required_sinr_per_message": plan.required_sinr_per_message,
        "residuals": residuals,
        "verified": residuals is not None
        and all(abs(r) < 1e-9 for r in residuals.values()),
    }
    print(canonical_json(out))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = configio.load_sim_config(args.config)
    hist = simulate_queue(cfg.queue)
    report = validate_queue_approximation(cfg.queue, hist)
    frame = cfg.queue.traffic.frame_duration_s
    at_bound = empirical_violation(hist, cfg.delay_bound_s, frame)
    bound_frames = max(round(cfg.delay_bound_s / frame), 0)
    out = {
        "analytic_decay_per_frame": report.analytic_decay_per_frame,
        "arrived": hist.arrived,
        "bound_checks": [
            {
                "analytic": c.analytic,
                "ci_high": c.ci_high,
                "ci_low": c.ci_low,
                "delay_frames": c.delay_frames,
                "empirical": c.empirical,
                "passed": c.passed,
            }
            for c in report.bound_checks
        ],
        "bounds_ok": report.bounds_ok,
        "departed": hist.departed,
        "empirical_decay_per_frame": report.empirical_decay_per_frame,
        "left_in_queue": hist.left_in_queue,
        "passed": report.passed,
        "slope_ok": report.slope_ok,
        "slope_relative_error": report.slope_relative_error,
        "total_packets_counted": hist.total_packets,
        "violation_at_bound": {
            "analytic": math.exp(-report.analytic_decay_per_frame * bound_frames),
            "ci_high": at_bound.ci_high,
            "ci_low": at_bound.ci_low,
            "delay_bound_s": cfg.delay_bound_s,
            "empirical": at_bound.probability,
        },
    }
    print(canonical_json(out))
    if args.output is not None:
        hist.to_csv(args.output)
    if args.plot:
        base = args.output if args.output is not None else args.config
        png = Path(base).with_suffix(".png")
        plots.plot_delay_ccdf(hist, report.analytic_decay_per_frame, png,
                              title="queueing delay CCDF")
    return EXIT_OK if report.passed else EXIT_RUNTIME


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "plan": _cmd_plan,
        "simulate": _cmd_simulate,
        "compare": _cmd_compare,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StabilityError as exc:
        print(f"unstable queue: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except NomaplanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
