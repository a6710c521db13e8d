"""Command-line entry point: analyze a program, report per-loop invariants.

Exit codes: 0 analysis ok (and oracle pass, if requested); 1 usage, parse or
configuration error; 2 solver defect (broken widening or fuel exhaustion);
3 oracle counterexample, i.e. an unsound invariant.  Diagnostics go to
stderr, the report to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from .extint import NEG_INF, POS_INF, ExtInt
from .intervals import (
    ENV_BOTTOM,
    AbstractEnv,
    Env,
    Interval,
    env_is_bottom,
    make_env,
)
from .lang.analysis import (
    AnalysisReport,
    DelayedWidening,
    NaiveWidening,
    ThresholdWidening,
    analyze,
)
from .lang.parser import ParseError, parse
from .oracle import ExplorationBounds, OracleConfigError, check_soundness, explore
from .solver import DEFAULT_FUEL, SolverDefect
from .widening import CONVERGED, Next, WideningNode, make_node

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEFECT = 2
EXIT_UNSOUND = 3

FUEL_ENV_VAR = "WIDENKIT_FUEL"
SEED_FAULTS = ("broken-widening", "non-terminating", "corrupt-invariant")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    input_path: str
    widening: str = "naive"
    thresholds_path: Optional[str] = None
    delay_count: Optional[int] = None
    fuel: Optional[int] = None  # None: WIDENKIT_FUEL if set, else DEFAULT_FUEL
    output_format: str = "text"
    oracle: bool = False
    max_steps: int = 100_000
    max_states: int = 1_000_000
    seed_fault: Optional[str] = None
    strategy_override: object = None  # programmatic strategies bypass the selector


# ---------------------------------------------------------------------------
# Report serialization.


def _endpoint_to_json(x: ExtInt) -> str:
    if x is NEG_INF:
        return "-inf"
    if x is POS_INF:
        return "inf"
    return str(x)


def _endpoint_from_json(s: str) -> ExtInt:
    if s == "-inf":
        return NEG_INF
    if s == "inf":
        return POS_INF
    return int(s)


def _env_to_json(env: AbstractEnv):
    if env_is_bottom(env):
        return "bottom"
    return {
        name: {"lo": _endpoint_to_json(e.lo), "hi": _endpoint_to_json(e.hi)}
        for name, e in env.items
    }


def _env_from_json(data) -> AbstractEnv:
    if data == "bottom":
        return ENV_BOTTOM
    return make_env(
        {
            name: Interval(_endpoint_from_json(v["lo"]), _endpoint_from_json(v["hi"]))
            for name, v in data.items()
        }
    )


def report_to_json(report: AnalysisReport) -> dict:
    return {
        "loops": [
            {
                "id": loop_id,
                "line": report.loop_lines[loop_id],
                "env": _env_to_json(report.loop_invariants[loop_id]),
            }
            for loop_id in sorted(report.loop_invariants)
        ],
        "final": _env_to_json(report.final_env),
        "strategy": report.strategy,
        "steps": report.solver_steps,
    }


def report_from_json(data: dict) -> AnalysisReport:
    invariants = {entry["id"]: _env_from_json(entry["env"]) for entry in data["loops"]}
    lines = {entry["id"]: entry["line"] for entry in data["loops"]}
    variables: Tuple[str, ...] = ()
    for env in list(invariants.values()) + [_env_from_json(data["final"])]:
        if isinstance(env, Env):
            variables = env.variables
            break
    return AnalysisReport(
        variables=variables,
        loop_invariants=invariants,
        loop_lines=lines,
        loop_traces={},
        final_env=_env_from_json(data["final"]),
        strategy=data["strategy"],
        solver_steps=data["steps"],
    )


def _interval_text(e: Interval) -> str:
    lo = "-inf" if e.lo is NEG_INF else str(e.lo)
    hi = "+inf" if e.hi is POS_INF else str(e.hi)
    return f"[{lo}, {hi}]"


def _env_text(env: AbstractEnv) -> str:
    if env_is_bottom(env):
        return "bottom"
    if not env.items:
        return "{}"
    return ", ".join(f"{name} ∈ {_interval_text(e)}" for name, e in env.items)


def render_text(report: AnalysisReport) -> str:
    lines = [
        f"loop@L{report.loop_lines[i]}: {_env_text(report.loop_invariants[i])}"
        for i in sorted(report.loop_invariants)
    ]
    lines.append(f"final: {_env_text(report.final_env)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Seeded faults, used to validate the defect and unsoundness exit paths.


class _AlwaysConvergeStrategy:
    """Claims convergence on every query; the solver's leaf check must object."""

    label = "seed-fault:broken-widening"

    def compile(self, variables, entry) -> WideningNode[AbstractEnv]:
        return make_node(entry, lambda v: CONVERGED)


class _NonTerminatingStrategy:
    """Re-proposes the same environment forever; only fuel stops it."""

    label = "seed-fault:non-terminating"

    def compile(self, variables, entry) -> WideningNode[AbstractEnv]:
        def node(u: AbstractEnv) -> WideningNode[AbstractEnv]:
            return make_node(u, lambda v: Next(node(u)))

        return node(entry)


def _pinch(e: Interval) -> Interval:
    if e.lo is not NEG_INF:
        return Interval(e.lo, e.lo)
    if e.hi is not POS_INF:
        return Interval(e.hi, e.hi)
    return Interval(0, 0)


def _corrupt_report(report: AnalysisReport) -> AnalysisReport:
    """Pinch every loop invariant to a single point per variable."""
    corrupted: Dict[int, AbstractEnv] = {}
    for loop_id, env in report.loop_invariants.items():
        if env_is_bottom(env):
            corrupted[loop_id] = env
        else:
            corrupted[loop_id] = make_env({name: _pinch(e) for name, e in env.items})
    return replace(report, loop_invariants=corrupted)


# ---------------------------------------------------------------------------
# Configuration and the run itself.


def _read_thresholds(path: str) -> Tuple[int, ...]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = [line.strip() for line in handle]
    except OSError as exc:
        raise UsageError(f"cannot read thresholds file: {exc}") from exc
    values: List[int] = []
    for lineno, text in enumerate(raw, start=1):
        if not text:
            continue
        try:
            values.append(int(text))
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: not an integer: {text!r}") from exc
    if not values:
        raise UsageError(f"{path}: thresholds file is empty")
    if any(a >= b for a, b in zip(values, values[1:])):
        raise UsageError(f"{path}: thresholds must be strictly ascending")
    return tuple(values)


def _resolve_fuel(config: CliConfig) -> int:
    if config.fuel is not None:
        fuel = config.fuel
    else:
        raw = os.environ.get(FUEL_ENV_VAR)
        if raw is None:
            return DEFAULT_FUEL
        try:
            fuel = int(raw)
        except ValueError as exc:
            raise UsageError(f"{FUEL_ENV_VAR} must be an integer, got {raw!r}") from exc
    if fuel < 1:
        raise UsageError("fuel must be a positive integer")
    return fuel


def _build_strategy(config: CliConfig):
    if config.strategy_override is not None:
        return config.strategy_override
    if config.seed_fault == "broken-widening":
        return _AlwaysConvergeStrategy()
    if config.seed_fault == "non-terminating":
        return _NonTerminatingStrategy()
    if config.widening == "naive":
        return NaiveWidening()
    if config.widening == "ramp":
        if config.thresholds_path is None:
            raise UsageError("--widening ramp requires --thresholds FILE")
        return ThresholdWidening(_read_thresholds(config.thresholds_path))
    if config.widening == "delay":
        if config.delay_count is None:
            raise UsageError("--widening delay requires --delay N")
        if config.delay_count < 0:
            raise UsageError("--delay must be nonnegative")
        inner = (
            ThresholdWidening(_read_thresholds(config.thresholds_path))
            if config.thresholds_path
            else NaiveWidening()
        )
        return DelayedWidening(config.delay_count, inner)
    raise UsageError(f"unknown widening strategy {config.widening!r}")


def run(config: CliConfig) -> int:
    """Execute one analysis per the config; returns the process exit code."""
    try:
        fuel = _resolve_fuel(config)
        strategy = _build_strategy(config)
        if config.seed_fault == "corrupt-invariant" and not config.oracle:
            raise UsageError("--seed-fault corrupt-invariant needs --oracle to observe it")
        if config.seed_fault is not None and config.seed_fault not in SEED_FAULTS:
            raise UsageError(f"unknown seed fault {config.seed_fault!r}")
        try:
            with open(config.input_path, "r", encoding="utf-8") as handle:
                source = handle.read()
        except OSError as exc:
            raise UsageError(f"cannot read input: {exc}") from exc
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        program = parse(source)
    except ParseError as exc:
        for issue in exc.issues:
            print(f"{config.input_path}:{issue}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report = analyze(program, strategy, fuel=fuel)
    except SolverDefect as defect:
        where = f" (loop {defect.loop_id})" if defect.loop_id is not None else ""
        print(f"solver defect{where}: {defect}", file=sys.stderr)
        return EXIT_DEFECT

    if config.seed_fault == "corrupt-invariant":
        report = _corrupt_report(report)

    oracle_payload = None
    oracle_line = None
    oracle_failed = False
    if config.oracle:
        bounds = ExplorationBounds(max_steps=config.max_steps, max_states=config.max_states)
        try:
            concrete = explore(program, bounds)
        except OracleConfigError as exc:
            print(f"oracle configuration error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        verdict = check_soundness(report, concrete)
        suffix = ", truncated" if concrete.truncated else ""
        if verdict.passed:
            oracle_line = f"oracle: pass ({verdict.states_checked} states checked{suffix})"
        else:
            oracle_failed = True
            first = verdict.counterexamples[0]
            oracle_line = (
                f"oracle: FAIL ({len(verdict.counterexamples)} counterexamples, "
                f"first at loop {first[0]}: {first[1]})"
            )
            for loop_id, state in verdict.counterexamples[:10]:
                print(f"counterexample: loop {loop_id}, state {state}", file=sys.stderr)
        oracle_payload = {
            "passed": verdict.passed,
            "states_checked": verdict.states_checked,
            "truncated": concrete.truncated,
            "counterexamples": [
                {"loop": loop_id, "state": {k: str(v) for k, v in state.items()}}
                for loop_id, state in verdict.counterexamples
            ],
        }

    if config.output_format == "json":
        payload = report_to_json(report)
        if oracle_payload is not None:
            payload["oracle"] = oracle_payload
        print(json.dumps(payload, indent=2))
    else:
        print(render_text(report))
        if oracle_line is not None:
            print(oracle_line)

    return EXIT_UNSOUND if oracle_failed else EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing.


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # map argparse's exit(2) onto the usage exit code
        raise UsageError(message)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="widenkit",
        description="Interval analysis of while-programs with pluggable widening strategies.",
    )
    parser.add_argument("input", help="program file to analyze")
    parser.add_argument(
        "--widening",
        choices=("naive", "ramp", "delay"),
        default="naive",
        help="widening strategy (default: naive)",
    )
    parser.add_argument(
        "--thresholds",
        metavar="FILE",
        help="ascending integer thresholds, one per line (required for ramp)",
    )
    parser.add_argument(
        "--delay", type=int, metavar="N", help="join steps between widenings (delay strategy)"
    )
    parser.add_argument(
        "--fuel",
        type=int,
        metavar="N",
        help=f"solver step budget (default {DEFAULT_FUEL}; ${FUEL_ENV_VAR} overrides)",
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text", help="report format"
    )
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check invariants against bounded concrete execution",
    )
    parser.add_argument(
        "--max-steps", type=int, default=100_000, metavar="N", help="oracle expansion budget"
    )
    parser.add_argument(
        "--max-states", type=int, default=1_000_000, metavar="N", help="oracle state budget"
    )
    parser.add_argument(
        "--seed-fault",
        choices=SEED_FAULTS,
        help="inject a deliberate defect to validate the exit-code contract",
    )
    return parser


def config_from_args(argv) -> CliConfig:
    args = build_arg_parser().parse_args(argv)
    return CliConfig(
        input_path=args.input,
        widening=args.widening,
        thresholds_path=args.thresholds,
        delay_count=args.delay,
        fuel=args.fuel,
        output_format=args.format,
        oracle=args.oracle,
        max_steps=args.max_steps,
        max_states=args.max_states,
        seed_fault=args.seed_fault,
    )


def main(argv=None) -> int:
    try:
        config = config_from_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
