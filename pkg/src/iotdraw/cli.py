"""Command-line front end.

Exit codes: 0 on success, 1 when the model itself is at fault (parse
errors, failed validation, impossible analysis requests), 2 for usage
mistakes and unreadable or unwritable files.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .analysis import (
    RANK_METRICS, enumerate_deployments, evaluate_scenarios, lifetime_sweep,
    predicted_lifetime, rank_scenarios, scenario_text, scenarios_to_csv,
)
from .engine import FreshnessPolicy, run_simulation
from .model import ModelError
from .modelfmt import parse_model
from .validate import validate_model

SEED_ENV_VAR = "IOTDRAW_SEED"


class _DomainFailure(Exception):
    pass


class _IoFailure(Exception):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IoFailure(f"cannot read {path}: {exc}") from None
    result = parse_model(text, path)
    if isinstance(result, list):
        raise _DomainFailure("\n".join(d.render() for d in result))
    return result


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _IoFailure(f"cannot write {path}: {exc}") from None
    print(f"wrote {path}")


def _resolve_seed(args) -> int | None:
    """--seed beats the environment, which beats the model's own seed."""
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise _IoFailure(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _cmd_validate(args) -> int:
    model = _load(args.model)
    report = validate_model(model, path=args.model)
    print(report.to_text())
    if args.csv:
        _write(args.csv, report.to_csv())
    return 0 if report.ok else 1


def _cmd_simulate(args) -> int:
    model = _load(args.model)
    report = run_simulation(
        model,
        freshness=FreshnessPolicy(args.max_age),
        stop_on_depletion=args.stop_on_depletion,
        seed=_resolve_seed(args),
        record_events=args.log is not None,
    )
    print(report.to_text())
    if args.log:
        _write(args.log, report.events_csv())
    return 0


def _cmd_deployments(args) -> int:
    model = _load(args.model)
    scenarios = enumerate_deployments(model)
    if args.rank:
        scenarios = rank_scenarios(evaluate_scenarios(model, scenarios), args.rank)
    for scenario in scenarios:
        print(scenario_text(scenario))
    print(f"{len(scenarios)} deployment scenario(s)")
    if args.csv:
        _write(args.csv, scenarios_to_csv(scenarios))
    return 0


def _cmd_rank(args) -> int:
    model = _load(args.model)
    scenarios = rank_scenarios(evaluate_scenarios(model), args.by)
    for scenario in scenarios:
        print(scenario_text(scenario))
    print(f"{len(scenarios)} deployment scenario(s), best first by {args.by}")
    if args.csv:
        _write(args.csv, scenarios_to_csv(scenarios))
    return 0


def _cmd_lifetime(args) -> int:
    model = _load(args.model)
    seed = _resolve_seed(args)
    if args.sweep_interval or args.sweep_max_age:
        table = lifetime_sweep(
            model, args.device,
            intervals=args.sweep_interval,
            max_ages=args.sweep_max_age,
            rounds=args.rounds,
            seed=seed if seed is not None else model.sim_config.rng_seed,
        )
        print(table.to_text())
        if args.csv:
            _write(args.csv, table.to_csv())
        return 0

    predicted = predicted_lifetime(model, args.device)
    report = run_simulation(model, stop_on_depletion=True, seed=seed, record_events=False)
    measured = report.lifetimes.get(args.device)
    print(f"device {args.device!r}")
    if predicted is None:
        print("  predicted lifetime: no depletion (requests cost nothing)")
    else:
        print(f"  predicted lifetime: {predicted} ticks")
    if measured is None:
        print(f"  measured lifetime: not depleted by tick {report.final_tick}")
    else:
        print(f"  measured lifetime: {measured} ticks")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iotdraw",
        description="Model, check, and simulate service-oriented IoT systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model against the design rules")
    p.add_argument("model")
    p.add_argument("--csv", metavar="FILE", help="also write the findings as CSV")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("simulate", help="run the model's discrete-event simulation")
    p.add_argument("model")
    p.add_argument("--seed", type=int, help=f"override the run seed (also {SEED_ENV_VAR})")
    p.add_argument("--max-age", type=int, default=0, metavar="TICKS",
                   help="serve cached sensor data up to this age (default 0: no cache)")
    p.add_argument("--stop-on-depletion", action="store_true",
                   help="halt at the first battery depletion")
    p.add_argument("--log", metavar="FILE", help="write the event log as CSV")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("deployments", help="enumerate feasible deployment scenarios")
    p.add_argument("model")
    p.add_argument("--rank", choices=RANK_METRICS, help="score and order the scenarios")
    p.add_argument("--csv", metavar="FILE", help="write the scenarios as CSV")
    p.set_defaults(handler=_cmd_deployments)

    p = sub.add_parser("rank", help="score every scenario and order by one metric")
    p.add_argument("model")
    p.add_argument("--by", choices=RANK_METRICS, required=True)
    p.add_argument("--csv", metavar="FILE", help="write the ranking as CSV")
    p.set_defaults(handler=_cmd_rank)

    p = sub.add_parser("lifetime", help="predict and measure a device's battery lifetime")
    p.add_argument("model")
    p.add_argument("--device", required=True)
    sweep = p.add_mutually_exclusive_group()
    sweep.add_argument("--sweep-interval", type=_int_list, metavar="A,B,C",
                       help="compare request intervals (ticks)")
    sweep.add_argument("--sweep-max-age", type=_int_list, metavar="A,B,C",
                       help="compare freshness windows (ticks)")
    p.add_argument("--rounds", type=int, default=30, help="sweep rounds per value")
    p.add_argument("--seed", type=int, help=f"sweep seed (also {SEED_ENV_VAR})")
    p.add_argument("--csv", metavar="FILE", help="write the sweep table as CSV")
    p.set_defaults(handler=_cmd_lifetime)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _IoFailure as failure:
        print(f"iotdraw: {failure}", file=sys.stderr)
        return 2
    except _DomainFailure as failure:
        print(str(failure), file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"iotdraw: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())
