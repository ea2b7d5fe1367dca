"""
Command-line entry point for the scheduling lab.
sched solve|simulate|adversary|sweep|gantt|charge
"""

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from adversaries.constructions import c_benevolent_adversary, proportional_lb_adversary, unweighted_adversary
from adversaries.driver import run_against_adversary
from analytics.gantt import render_gantt, render_gantt_text
from analytics.summary import format_summary, summarize_sweep
from charging.charging_report import ERROR, build_charging, check_claims
from core.errors import (InfeasibleScheduleError, InvalidInstanceError, MalformedInputError, ParameterError,
                         SchedulingError, SolverGuardError)
from core.models import format_rational, to_time
from core.validation import require_valid, schedule_problems
from harness.experiments import (ADVERSARY_KINDS, SWEEP_SOURCES, ExperimentConfig, run_adversary_sweep,
                                 run_random_sweep, write_sweep_csv)
from harness.settings import DEFAULT_CONFIG_PATH, HarnessSettings, load_settings
from simulator.algorithms import ALGORITHMS, make_algorithm
from simulator.engine import simulate
from solver.offline_solver import SMALLEST_IDS, TIE_BREAKS, optimal_offline
from storage import codec

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
INPUT_ERRORS = (MalformedInputError, InvalidInstanceError, ParameterError, SolverGuardError,
                InfeasibleScheduleError, OSError)


class SchedArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1; option prefixes are not expanded."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def rational(text: str) -> Fraction:
    try:
        return to_time(text)
    except MalformedInputError as e:
        raise argparse.ArgumentTypeError(str(e))


def setup_logging(verbose: bool = False, log_file: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


def fmt(value) -> str:
    """Exact num/den with a decimal approximation; floats as they are."""
    if isinstance(value, float):
        return f"{value:.12g}"
    return f"{format_rational(value)} ({float(value):.12g})"


def cmd_solve(config: ExperimentConfig) -> int:
    """Print the optimal offline value and schedule of an instance file."""
    instance = codec.load_instance(config.instance)
    schedule, stats = optimal_offline(instance, node_limit=config.node_limit, prefer=config.prefer)
    print(f"value: {fmt(schedule.value)}")
    for job_id, start, end in schedule.intervals(instance):
        print(f"  job {job_id}: [{start}, {end})")
    print(f"nodes: {stats.nodes}, prunes: {stats.prunes}, {stats.wall_ms:.1f} ms")
    if config.out:
        codec.save_schedule(config.out, schedule)
    return EXIT_OK


def cmd_simulate(config: ExperimentConfig) -> int:
    """Run an online algorithm on an instance file."""
    instance = codec.load_instance(config.instance)
    trace, schedule = simulate(instance, make_algorithm(config.algo, config.node_limit))
    print(f"{config.algo} value: {fmt(schedule.value)}")
    print(f"executed: {' '.join(str(i) for i in schedule.execution_order()) or '-'}")
    if config.out:
        codec.save_schedule(config.out, schedule)
    if config.trace_out:
        codec.save_trace(config.trace_out, trace)
    return EXIT_OK


def cmd_adversary(config: ExperimentConfig) -> int:
    """Run the chosen adversary against the chosen algorithm."""
    if config.kind == "proportional":
        adversary = proportional_lb_adversary(config.t, config.eps)
    elif config.kind == "unweighted":
        adversary = unweighted_adversary(config.t, config.big_n)
    else:
        adversary = c_benevolent_adversary(config.t, config.big_n, config.eps)
    outcome = run_against_adversary(make_algorithm(config.algo, config.node_limit), adversary,
                                    node_limit=config.node_limit)
    target = adversary.target_ratio()
    print(f"adversary: {adversary.name}, weights: {adversary.weights}, jobs: {len(outcome.instance)}")
    print(f"ALG: {fmt(outcome.alg_value)}")
    print(f"OPT: {fmt(outcome.opt_value)}")
    print(f"ratio: {'unbounded' if outcome.unbounded else fmt(outcome.ratio)}")
    print(f"target: {fmt(target)}")
    if config.out:
        codec.write_json(config.out, codec.outcome_to_json(outcome, target))
    return EXIT_OK


def cmd_sweep(config: ExperimentConfig) -> int:
    """Write one CSV row per (t, seed) trial and print the per-t summary."""
    if config.source == "lb-adversary":
        rows = run_adversary_sweep(config.t_values, config.eps, config.algo, config.node_limit)
    else:
        rows = run_random_sweep(config.t_values, config.trials, config.seed, config.max_n, config.algo,
                                config.generator, fixed_n=config.n, node_limit=config.node_limit,
                                workers=config.workers)
    write_sweep_csv(rows, config.out)
    for line in format_summary(summarize_sweep(rows)):
        print(line)
    failed = [row for row in rows if not row.ok]
    if failed:
        logger.warning(f"{len(failed)} rows fall below the bound, first at t={failed[0].t} seed={failed[0].seed}")
    return EXIT_OK


def cmd_gantt(config: ExperimentConfig, settings: HarnessSettings) -> int:
    """Render one or two schedules (ALG above OPT) as SVG and optionally as text."""
    instance = codec.load_instance(config.instance)
    schedules = [codec.load_schedule(path) for path in config.schedules]
    for path, schedule in zip(config.schedules, schedules):
        problems = schedule_problems(instance, schedule)
        if problems:
            raise InfeasibleScheduleError(f"{path}: {problems[0]}")
    labels = ["ALG", "OPT"] if len(schedules) == 2 else ["schedule"]
    lanes = list(zip(labels, schedules))
    charges = None
    if config.charges and len(schedules) == 2:
        charges = build_charging(schedules[1], schedules[0], instance).charges
    render_gantt(instance, lanes, config.out, charges=charges, style=settings.gantt)
    if config.text:
        print(render_gantt_text(instance, lanes), end="")
    return EXIT_OK


def cmd_charge(config: ExperimentConfig) -> int:
    """Charge OPT to an online run and report every claim finding."""
    instance = codec.load_instance(config.instance)
    require_valid(instance)
    _, alg = simulate(instance, make_algorithm(config.algo, config.node_limit))
    opt, _ = optimal_offline(instance, node_limit=config.node_limit)
    report = build_charging(opt, alg, instance)
    violations = check_claims(report)
    for job_id, total in report.totals().items():
        labels = ", ".join(f"{c.opt_job_id}:{c.label}={c.span}" for c in report.charges_for(job_id))
        print(f"job {job_id} (p={report.alg_spans[job_id]}): total {total} [{labels}]")
    for charge in report.orphans:
        print(f"orphan: job {charge.opt_job_id} span {charge.span}")
    print(f"charged: {fmt(report.total())}, OPT: {fmt(opt.value)}, ALG: {fmt(alg.value)}")
    for violation in violations:
        print(violation)
    if config.out:
        codec.write_json(config.out, codec.charge_report_to_json(report, violations))
    if any(v.severity == ERROR for v in violations):
        return EXIT_INTERNAL
    print("✅ aggregate bound holds")
    return EXIT_OK


def build_parser() -> SchedArgumentParser:
    common = SchedArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    common.add_argument("--log-file", help="Also write logs to this file")
    common.add_argument("--config", default=DEFAULT_CONFIG_PATH, help="Harness YAML settings")
    common.add_argument("--node-limit", type=int, help="Branch-and-bound node cap (overrides SCHED_SOLVER_NODE_LIMIT)")
    common.add_argument("--out", help="Output path")

    parser = SchedArgumentParser(prog="sched", description="Advance-notice scheduling lab")
    sub = parser.add_subparsers(dest="mode", required=True)
    algo = {"choices": sorted(ALGORITHMS), "default": "a_off", "help": "Online algorithm (default: a_off)"}

    solve = sub.add_parser("solve", parents=[common], help="Optimal offline schedule of an instance")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--prefer", choices=TIE_BREAKS, default=SMALLEST_IDS, help="Tie-break among optima")

    sim = sub.add_parser("simulate", parents=[common], help="Run an online algorithm on an instance")
    sim.add_argument("--instance", required=True)
    sim.add_argument("--algo", **algo)
    sim.add_argument("--trace", dest="trace_out", help="Write the event trace as JSON lines")

    adv = sub.add_parser("adversary", parents=[common], help="Run an adaptive adversary")
    adv.add_argument("--kind", choices=ADVERSARY_KINDS, default="proportional")
    adv.add_argument("--algo", **algo)
    adv.add_argument("--t", type=rational, required=True)
    adv.add_argument("--eps", type=rational)
    adv.add_argument("--n", "--N", dest="big_n", type=int, help="Sub-job count of the unweighted and benevolent adversaries")

    sweep = sub.add_parser("sweep", parents=[common], help="Ratio sweep over notice levels")
    sweep.add_argument("--t", dest="t_values", type=rational, action="append", help="Notice level (repeatable)")
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--n", type=int, help="Fixed job count (default: drawn per trial up to --max-n)")
    sweep.add_argument("--max-n", type=int)
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--source", choices=SWEEP_SOURCES, default="random")
    sweep.add_argument("--eps", type=rational)
    sweep.add_argument("--algo", **algo)

    gantt = sub.add_parser("gantt", parents=[common], help="Render schedules as an SVG Gantt chart")
    gantt.add_argument("--instance", required=True)
    gantt.add_argument("--schedule", dest="schedules", action="append", default=[],
                       help="Schedule JSON (give ALG then OPT)")
    gantt.add_argument("--text", action="store_true", help="Also print a plain-text chart")
    gantt.add_argument("--charges", action="store_true", help="Draw charge arrows from OPT to ALG")

    charge = sub.add_parser("charge", parents=[common], help="Check the charging bounds on an instance")
    charge.add_argument("--instance", required=True)
    charge.add_argument("--algo", **algo)
    return parser


def to_config(args: argparse.Namespace, settings: HarnessSettings) -> ExperimentConfig:
    """Merge parsed flags over the YAML settings."""
    out_dir = Path(settings.output_dir)
    default_out = {"sweep": out_dir / "sweep.csv", "gantt": out_dir / "gantt.svg"}.get(args.mode)
    t_values = getattr(args, "t_values", None) or settings.t_values
    return ExperimentConfig(
        mode=args.mode,
        instance=getattr(args, "instance", None),
        algo=getattr(args, "algo", "a_off"),
        t=getattr(args, "t", None),
        t_values=list(t_values),
        eps=getattr(args, "eps", None),
        big_n=getattr(args, "big_n", None),
        kind=getattr(args, "kind", "proportional"),
        n=getattr(args, "n", None),
        trials=_pick(getattr(args, "trials", None), settings.trials),
        seed=_pick(getattr(args, "seed", None), settings.base_seed),
        out=args.out or (str(default_out) if default_out else None),
        schedules=getattr(args, "schedules", []),
        workers=_pick(getattr(args, "workers", None), settings.workers),
        source=getattr(args, "source", "random"),
        node_limit=args.node_limit,
        max_n=_pick(getattr(args, "max_n", None), settings.max_n),
        prefer=getattr(args, "prefer", SMALLEST_IDS),
        trace_out=getattr(args, "trace_out", None),
        text=getattr(args, "text", False),
        charges=getattr(args, "charges", False),
        generator=settings.generator,
    )


def _pick(value, default):
    return default if value is None else value


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit status."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.log_file)
    settings = load_settings(args.config)

    try:
        config = to_config(args, settings)
        config.validate()
        if config.mode == "solve":
            return cmd_solve(config)
        if config.mode == "simulate":
            return cmd_simulate(config)
        if config.mode == "adversary":
            return cmd_adversary(config)
        if config.mode == "sweep":
            return cmd_sweep(config)
        if config.mode == "gantt":
            return cmd_gantt(config, settings)
        return cmd_charge(config)
    except INPUT_ERRORS as e:
        logger.error(f"{args.mode}: {e}")
        return EXIT_INPUT
    except SchedulingError as e:
        logger.error(f"{args.mode}: internal invariant breach: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
