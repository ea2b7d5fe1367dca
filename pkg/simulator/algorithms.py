"""
Online algorithms for the scheduling lab.
A_Off replans optimally over everything announced so far; greedy starts the heaviest available job.
"""

import logging
from fractions import Fraction
from typing import Iterable, Optional, Tuple

from core.errors import ContractViolationError
from core.models import Instance, Job, Schedule, ScheduleEntry
from core.weights import WeightModel
from simulator.engine import OnlineAlgorithm, simulate
from simulator.trace import MachineState, Plan, SimulationTrace
from solver.offline_solver import SMALLEST_IDS, TIE_BREAKS, optimal_offline

logger = logging.getLogger(__name__)


def a_off_replan(known_jobs: Iterable[Job], now: Fraction, busy_until: Fraction,
                 weights: Optional[WeightModel] = None, node_limit: Optional[int] = None,
                 prefer: str = SMALLEST_IDS) -> Plan:
    """Optimal plan for the known, unstarted jobs given the machine is busy until busy_until.

    Every release is clipped to max(r, L) with L = max(busy_until, now); jobs
    that cannot finish by their deadline from there are dropped.

    Raises:
        ContractViolationError: a job has not been announced by now
    """
    weights = weights or WeightModel.proportional()
    floor = max(busy_until, now)
    clipped = []
    for job in known_jobs:
        if job.a > now:
            raise ContractViolationError(f"Job {job.id} is announced at {job.a}, after now = {now}")
        release = max(job.r, floor)
        if release + job.p <= job.d:
            clipped.append(job.with_release(release))
    if not clipped:
        return Plan()
    schedule, stats = optimal_offline(Instance(tuple(clipped), 0, weights), node_limit=node_limit,
                                      prefer=prefer, floor=floor)
    logger.debug(f"A_Off replan at {now}: {len(clipped)} candidates, {len(schedule)} planned, {stats.nodes} nodes")
    return Plan(schedule.entries)


class AOffAlgorithm(OnlineAlgorithm):
    """Recompute an optimal schedule of the pending jobs at every announcement batch.

    With replan_on_wake the plan is also recomputed whenever the machine
    goes idle, which never lowers the planned value.
    """

    def __init__(self, node_limit: Optional[int] = None, prefer: str = SMALLEST_IDS, replan_on_wake: bool = False):
        if prefer not in TIE_BREAKS:
            raise ValueError(f"Unknown tie-break policy: {prefer}")
        self.node_limit = node_limit
        self.prefer = prefer
        self.replan_on_wake = replan_on_wake
        self.name = "a_off_eager" if replan_on_wake else "a_off"

    def _replan(self, now: Fraction, state: MachineState) -> Plan:
        return a_off_replan(state.pending, now, state.busy_until, state.weights, self.node_limit, self.prefer)

    def on_announce(self, now: Fraction, jobs: Tuple[Job, ...], state: MachineState) -> Optional[Plan]:
        return self._replan(now, state)

    def on_wake(self, now: Fraction, state: MachineState) -> Optional[Plan]:
        if not self.replan_on_wake:
            return None
        return self._replan(now, state)


class GreedyAlgorithm(OnlineAlgorithm):
    """Plan only the next start: at the earliest moment some job can start, take the heaviest one."""
    name = "greedy"

    def _next_start(self, state: MachineState) -> Optional[Plan]:
        free = state.busy_until
        candidates = [job for job in state.pending if max(job.r, free) <= job.latest_start]
        if not candidates:
            return Plan()
        moment = min(max(job.r, free) for job in candidates)
        ready = [job for job in candidates if job.r <= moment <= job.latest_start]
        chosen = min(ready, key=lambda job: (-state.weights.evaluate(job.p), job.id))
        return Plan((ScheduleEntry(chosen.id, moment),))

    def on_announce(self, now: Fraction, jobs: Tuple[Job, ...], state: MachineState) -> Optional[Plan]:
        return self._next_start(state)

    def on_wake(self, now: Fraction, state: MachineState) -> Optional[Plan]:
        return self._next_start(state)


def run_a_off(instance: Instance, node_limit: Optional[int] = None,
              prefer: str = SMALLEST_IDS) -> Tuple[SimulationTrace, Schedule]:
    """Simulate A_Off on a fixed instance."""
    return simulate(instance, AOffAlgorithm(node_limit=node_limit, prefer=prefer))


def run_greedy(instance: Instance) -> Tuple[SimulationTrace, Schedule]:
    """Simulate greedy on a fixed instance."""
    return simulate(instance, GreedyAlgorithm())


ALGORITHMS = {
    "a_off": lambda node_limit=None: AOffAlgorithm(node_limit=node_limit),
    "a_off_eager": lambda node_limit=None: AOffAlgorithm(node_limit=node_limit, replan_on_wake=True),
    "greedy": lambda node_limit=None: GreedyAlgorithm(),
}


def make_algorithm(name: str, node_limit: Optional[int] = None) -> OnlineAlgorithm:
    """Build an online algorithm by its harness name."""
    try:
        return ALGORITHMS[name](node_limit=node_limit)
    except KeyError:
        raise ValueError(f"Unknown algorithm '{name}', expected one of {sorted(ALGORITHMS)}")
