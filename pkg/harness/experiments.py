"""
Experiments for the scheduling lab harness.
Builds sweep rows from random instances or the lower-bound adversary and writes them as CSV.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from adversaries.constructions import proportional_lb_adversary
from adversaries.driver import run_against_adversary
from adversaries.generator import random_instance
from core.errors import ParameterError
from core.models import competitive_bound, format_rational
from harness.settings import GeneratorSettings
from simulator.algorithms import make_algorithm, run_greedy
from simulator.engine import simulate
from solver.offline_solver import SMALLEST_IDS, optimal_offline

logger = logging.getLogger(__name__)

MODES = ("solve", "simulate", "adversary", "sweep", "gantt", "charge")
ADVERSARY_KINDS = ("proportional", "unweighted", "benevolent")
SWEEP_SOURCES = ("random", "lb-adversary")

CSV_COLUMNS = ["t", "n", "seed", "alg_num", "alg_den", "opt_num", "opt_den", "ratio", "bound", "ok",
               "nodes", "ms"]


@dataclass
class ExperimentConfig:
    """Everything one harness command needs."""
    mode: str
    instance: Optional[str] = None
    algo: str = "a_off"
    t: Optional[Fraction] = None
    t_values: List[Fraction] = field(default_factory=list)
    eps: Optional[Fraction] = None
    big_n: Optional[int] = None
    kind: str = "proportional"
    n: Optional[int] = None
    trials: int = 0
    seed: int = 0
    out: Optional[str] = None
    schedules: List[str] = field(default_factory=list)
    workers: int = 1
    source: str = "random"
    node_limit: Optional[int] = None
    max_n: int = 8
    prefer: str = SMALLEST_IDS
    trace_out: Optional[str] = None
    text: bool = False
    charges: bool = False
    generator: GeneratorSettings = field(default_factory=GeneratorSettings)

    def validate(self) -> None:
        """Check that the fields needed by the mode are present and consistent.

        Raises:
            ParameterError: a required field is missing or out of range
        """
        if self.mode not in MODES:
            raise ParameterError(f"Unknown mode '{self.mode}', expected one of {MODES}")
        if self.mode in ("solve", "simulate", "charge") and not self.instance:
            raise ParameterError(f"{self.mode} needs --instance")
        if self.mode == "adversary":
            if self.kind not in ADVERSARY_KINDS:
                raise ParameterError(f"Unknown adversary kind '{self.kind}', expected one of {ADVERSARY_KINDS}")
            if self.t is None:
                raise ParameterError("adversary needs --t")
            if self.kind in ("proportional", "benevolent") and self.eps is None:
                raise ParameterError(f"{self.kind} adversary needs --eps")
            if self.kind in ("unweighted", "benevolent") and self.big_n is None:
                raise ParameterError(f"{self.kind} adversary needs --n")
        if self.mode == "sweep":
            if self.source not in SWEEP_SOURCES:
                raise ParameterError(f"Unknown sweep source '{self.source}', expected one of {SWEEP_SOURCES}")
            if self.trials < 0:
                raise ParameterError(f"trials must be nonnegative, got {self.trials}")
            if self.n is not None and self.n < 0:
                raise ParameterError(f"n must be nonnegative, got {self.n}")
            if self.source == "lb-adversary" and self.eps is None:
                raise ParameterError("lb-adversary sweep needs --eps")
        if self.mode == "gantt" and not 1 <= len(self.schedules) <= 2:
            raise ParameterError("gantt needs one or two --schedule files")
        if self.workers < 1:
            raise ParameterError(f"workers must be at least 1, got {self.workers}")


@dataclass(frozen=True)
class SweepRow:
    """One trial: the algorithm and greedy against OPT on one instance."""
    t: Fraction
    n: int
    seed: int
    alg: Fraction
    opt: Fraction
    greedy: Fraction
    nodes: int
    ms: float

    @property
    def ratio(self) -> Fraction:
        return self.alg / self.opt if self.opt else Fraction(1)

    @property
    def greedy_ratio(self) -> Fraction:
        return self.greedy / self.opt if self.opt else Fraction(1)

    @property
    def bound(self) -> Fraction:
        return competitive_bound(self.t)

    @property
    def ok(self) -> bool:
        return self.ratio >= self.bound

    def to_record(self) -> dict:
        return {
            "t": format_rational(self.t),
            "n": self.n,
            "seed": self.seed,
            "alg_num": self.alg.numerator,
            "alg_den": self.alg.denominator,
            "opt_num": self.opt.numerator,
            "opt_den": self.opt.denominator,
            "ratio": f"{float(self.ratio):.12g}",
            "bound": f"{float(self.bound):.12g}",
            "ok": self.ok,
            "nodes": self.nodes,
            "ms": f"{self.ms:.3f}",
        }


@dataclass(frozen=True)
class TrialTask:
    t: Fraction
    seed: int
    max_n: int
    fixed_n: Optional[int]
    algo: str
    node_limit: Optional[int]
    generator: GeneratorSettings


def trial_size(seed: int, max_n: int) -> int:
    """Job count of a trial, drawn from its own seed."""
    if max_n < 1:
        return 0
    return int(np.random.default_rng(seed).integers(1, max_n, endpoint=True))


def run_trial(task: TrialTask) -> SweepRow:
    """Generate one instance and score the algorithm and greedy on it."""
    clock = time.perf_counter()
    n = task.fixed_n if task.fixed_n is not None else trial_size(task.seed, task.max_n)
    gen = task.generator
    instance = random_instance(n, task.t, gen.horizon, gen.p_range, gen.slack_range,
                               seed=task.seed, denominator=gen.denominator)
    _, alg = simulate(instance, make_algorithm(task.algo, task.node_limit))
    _, greedy = run_greedy(instance)
    opt, stats = optimal_offline(instance, node_limit=task.node_limit)
    ms = (time.perf_counter() - clock) * 1000
    return SweepRow(task.t, n, task.seed, alg.value, opt.value, greedy.value, stats.nodes, ms)


def run_random_sweep(t_values: Sequence[Fraction], trials: int, base_seed: int, max_n: int,
                     algo: str = "a_off", generator: Optional[GeneratorSettings] = None,
                     fixed_n: Optional[int] = None, node_limit: Optional[int] = None,
                     workers: int = 1) -> List[SweepRow]:
    """Run trials seeded base_seed, base_seed+1, ... for every t; rows come back in (t, seed) order."""
    generator = generator or GeneratorSettings()
    tasks = [TrialTask(Fraction(t), base_seed + i, max_n, fixed_n, algo, node_limit, generator)
             for t in t_values for i in range(trials)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_trial, tasks))
    else:
        rows = [run_trial(task) for task in tasks]
    rows.sort(key=lambda row: (row.t, row.seed))
    logger.info(f"Sweep finished: {len(rows)} trials over {len(t_values)} notice levels")
    return rows


def run_adversary_sweep(t_values: Sequence[Fraction], eps: Fraction, algo: str = "a_off",
                        node_limit: Optional[int] = None) -> List[SweepRow]:
    """One row per t: the algorithm against the proportional lower-bound adversary.

    The construction draws nothing at random, so every row has seed 0; nodes
    counts the offline solve of the instance the algorithm was shown.
    """
    rows = []
    for t in t_values:
        clock = time.perf_counter()
        outcome = run_against_adversary(make_algorithm(algo, node_limit), proportional_lb_adversary(t, eps),
                                        node_limit=node_limit)
        greedy = run_against_adversary(make_algorithm("greedy"), proportional_lb_adversary(t, eps),
                                       node_limit=node_limit)
        ms = (time.perf_counter() - clock) * 1000
        rows.append(SweepRow(Fraction(t), len(outcome.instance), 0, outcome.alg_value, outcome.opt_value,
                             greedy.alg_value, outcome.stats.nodes, ms))
    return rows


def rows_to_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_record() for row in rows], columns=CSV_COLUMNS)


def write_sweep_csv(rows: Sequence[SweepRow], out: Union[str, Path]) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows_to_frame(rows).to_csv(out, index=False)
    logger.info(f"Wrote {len(rows)} sweep rows to {out}")
    return out
