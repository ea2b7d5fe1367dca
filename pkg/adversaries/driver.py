"""
Runs an online algorithm against an adaptive adversary and scores the outcome.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Set

from core.errors import AdversaryError
from core.models import Instance, Job, Schedule
from core.validation import validate_instance
from core.weights import Weight
from simulator.engine import JobSource, OnlineAlgorithm, Simulator
from simulator.trace import SimulationTrace
from solver.offline_solver import SolverStats, optimal_offline
from adversaries.constructions import Adversary

logger = logging.getLogger(__name__)


@dataclass
class AdversaryOutcome:
    """Result of one algorithm-versus-adversary run."""
    instance: Instance
    alg_value: Weight
    opt_value: Weight
    ratio: Weight
    unbounded: bool
    trace: SimulationTrace
    alg_schedule: Schedule
    opt_schedule: Schedule
    stats: SolverStats = field(default_factory=SolverStats)

    @property
    def ratio_label(self) -> str:
        if self.unbounded:
            return f"unbounded (OPT = {self.opt_value}, ALG = 0)"
        return str(self.ratio)


class AdversarySource(JobSource):
    """Queues the jobs an adversary emits and checks each one on arrival."""

    def __init__(self, adversary: Adversary):
        self.adversary = adversary
        self.queue: deque = deque()
        self.emitted: List[Job] = []
        self.ids: Set[int] = set()
        self.finished = False

    def poll(self, trace: SimulationTrace, now: Fraction) -> None:
        if self.finished:
            return
        jobs = self.adversary.next(trace, now)
        if jobs is None:
            self.finished = True
            return
        for job in jobs:
            self._check(job, now)
            self.emitted.append(job)
            self.ids.add(job.id)
        self.queue = deque(sorted(list(self.queue) + list(jobs), key=lambda job: job.a))

    def _check(self, job: Job, now: Fraction) -> None:
        if job.a < now:
            raise AdversaryError(f"{self.adversary.name} announced job {job.id} at {job.a}, in the past (now = {now})")
        if job.id in self.ids:
            raise AdversaryError(f"{self.adversary.name} reused job id {job.id}")
        violations = validate_instance(Instance((job,), self.adversary.t, self.adversary.weights))
        if violations:
            raise AdversaryError(f"{self.adversary.name} emitted an invalid job: {violations[0]}")

    def due(self, now: Fraction) -> List[Job]:
        batch = []
        while self.queue and self.queue[0].a == now:
            batch.append(self.queue.popleft())
        return batch

    def next_time(self) -> Optional[Fraction]:
        return self.queue[0].a if self.queue else None


def run_against_adversary(algorithm: OnlineAlgorithm, adversary: Adversary,
                          node_limit: Optional[int] = None) -> AdversaryOutcome:
    """Simulate the algorithm while the adversary reveals jobs, then solve the emitted instance offline.

    An empty run scores ratio 1. When OPT is positive but the algorithm ran
    nothing the outcome is flagged unbounded with ratio 0.

    Raises:
        AdversaryError: the adversary emitted a job in the past or without its own notice
    """
    source = AdversarySource(adversary)
    simulator = Simulator(algorithm, adversary.weights, source, adversary.t)
    trace, alg_schedule = simulator.run()

    instance = Instance.build(source.emitted, adversary.t, adversary.weights)
    opt_schedule, stats = optimal_offline(instance, node_limit=node_limit)
    alg_value, opt_value = alg_schedule.value, opt_schedule.value

    unbounded = False
    if opt_value == 0:
        ratio = Fraction(1) if adversary.weights.is_exact else 1.0
    elif alg_value == 0:
        ratio, unbounded = adversary.weights.zero(), True
    else:
        ratio = alg_value / opt_value

    logger.info(f"{algorithm.name} vs {adversary.name}: {len(instance)} jobs, ALG = {alg_value}, "
                f"OPT = {opt_value}, ratio {'unbounded' if unbounded else ratio}")
    return AdversaryOutcome(instance, alg_value, opt_value, ratio, unbounded, trace, alg_schedule, opt_schedule,
                            stats)
