"""
Exact offline solver for single-machine real-time throughput.
Branch-and-bound over job orderings, plus a brute-force oracle.

Both solvers only enumerate earliest-start schedules: for a fixed order,
every job starts at max(release, previous finish). Any feasible schedule
sorted by start time stays feasible when each job is shifted as early as
its window allows, because an earlier finish never shrinks the window of a
successor. So the best earliest-start schedule is optimal.
"""

import logging
import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from core.errors import SolverGuardError
from core.models import Instance, Job, Schedule, ScheduleEntry, to_time
from core.weights import PROPORTIONAL, UNWEIGHTED, WeightModel

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 8
NODE_LIMIT_ENV = "SCHED_SOLVER_NODE_LIMIT"

# Tie-break policies among equal-value optima
SMALLEST_IDS = "smallest-ids"
LARGEST_IDS = "largest-ids"
TIE_BREAKS = (SMALLEST_IDS, LARGEST_IDS)


@dataclass
class SolverStats:
    """Search effort of one optimal_offline call."""
    nodes: int = 0
    prunes: int = 0
    wall_time: float = 0.0  # seconds

    @property
    def wall_ms(self) -> float:
        return self.wall_time * 1000.0


def default_node_limit() -> Optional[int]:
    """Node cap from SCHED_SOLVER_NODE_LIMIT; None (unlimited) when unset or 0."""
    raw = os.getenv(NODE_LIMIT_ENV, "").strip()
    if not raw:
        return None
    try:
        limit = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {NODE_LIMIT_ENV}={raw!r}")
        return None
    return limit if limit > 0 else None


def _exact_value(weights: WeightModel, spans: Sequence[Fraction]):
    # fsum is correctly rounded, so float totals do not depend on summation order
    if weights.is_exact:
        return sum((weights.evaluate(p) for p in spans), weights.zero())
    return math.fsum(weights.evaluate(p) for p in spans)


def _is_better(candidate: tuple, incumbent: Optional[tuple], prefer: str) -> bool:
    """Compare (value, sorted ids, start vector) triples under the tie-break policy.

    Higher value wins; then the lexicographically smallest sorted id tuple
    (largest under LARGEST_IDS); then the earliest start vector.
    """
    if incumbent is None:
        return True
    value, ids, starts = candidate
    best_value, best_ids, best_starts = incumbent
    if value != best_value:
        return value > best_value
    if ids != best_ids:
        if prefer == LARGEST_IDS:
            return tuple(-i for i in ids) < tuple(-i for i in best_ids)
        return ids < best_ids
    return starts < best_starts


def earliest_start_schedule(jobs: Sequence[Job], floor=0,
                            weights: Optional[WeightModel] = None) -> Optional[Schedule]:
    """Start each job as early as possible in the given order.

    s_1 = max(r_1, floor) and s_{k+1} = max(r_{k+1}, s_k + p_k).

    Args:
        jobs: Distinct jobs in execution order
        floor: Earliest time any job may start
        weights: Weight model used for the schedule value (proportional by default)

    Returns:
        The schedule, or None if some job would miss its deadline
    """
    weights = weights or WeightModel.proportional()
    finish = to_time(floor)
    entries = []
    for job in jobs:
        start = max(job.r, finish)
        finish = start + job.p
        if finish > job.d:
            return None
        entries.append(ScheduleEntry(job.id, start))
    return Schedule(tuple(entries), _exact_value(weights, [job.p for job in jobs]))


def brute_force_opt(instance: Instance, prefer: str = SMALLEST_IDS) -> Schedule:
    """Optimal schedule by exhausting every feasible ordering of every subset.

    A sequence is only extended while it is feasible; once a job misses its
    deadline every extension does too, since starts only move later.

    Raises:
        SolverGuardError: more than BRUTE_FORCE_LIMIT jobs
    """
    if len(instance.jobs) > BRUTE_FORCE_LIMIT:
        raise SolverGuardError(
            f"brute_force_opt is limited to BRUTE_FORCE_LIMIT={BRUTE_FORCE_LIMIT} jobs, got {len(instance.jobs)}")
    jobs = sorted(instance.jobs, key=lambda job: job.id)
    weights = instance.weights
    best: List = [None, ()]  # (value, ids, starts) key and the entries behind it

    def extend(sequence: List[Tuple[Job, Fraction]], finish: Fraction, used: frozenset):
        chosen = sorted(sequence, key=lambda item: item[0].id)
        key = (_exact_value(weights, [job.p for job, _ in chosen]),
               tuple(job.id for job, _ in chosen),
               tuple(start for _, start in chosen))
        if _is_better(key, best[0], prefer):
            best[0], best[1] = key, tuple(sequence)
        for job in jobs:
            if job.id in used:
                continue
            start = max(job.r, finish)
            if start + job.p > job.d:
                continue
            extend(sequence + [(job, start)], start + job.p, used | {job.id})

    extend([], Fraction(0), frozenset())
    entries = tuple(ScheduleEntry(job.id, start) for job, start in best[1])
    return Schedule(entries, best[0][0])


class _IntegerFrame:
    """The instance rescaled by the LCM of all denominators, so the search runs on ints."""

    def __init__(self, jobs: Sequence[Job], weights: WeightModel, floor: Fraction):
        denominators = [floor.denominator]
        for job in jobs:
            denominators.extend((job.r.denominator, job.p.denominator, job.d.denominator))
        self.scale = math.lcm(*denominators)
        self.floor = int(floor * self.scale)
        self.jobs = list(jobs)
        self.ids = [job.id for job in jobs]
        self.release = [int(job.r * self.scale) for job in jobs]
        self.proc = [int(job.p * self.scale) for job in jobs]
        self.latest = [int(job.latest_start * self.scale) for job in jobs]
        # Search weights only need to order candidate sets like the true weights do
        if weights.kind == PROPORTIONAL:
            self.weight = list(self.proc)
        elif weights.kind == UNWEIGHTED:
            self.weight = [1] * len(self.jobs)
        else:
            self.weight = [weights.evaluate(job.p) for job in jobs]
        self.exact = weights.is_exact
        self.weights = weights

    def value_of(self, chosen: Sequence[int]):
        if self.exact:
            return sum(self.weight[i] for i in chosen)
        return math.fsum(self.weight[i] for i in chosen)

    def to_time(self, tick: int) -> Fraction:
        return Fraction(tick, self.scale)


class _BranchAndBound:
    """Depth-first search over which job runs next, pruned by remaining feasible weight."""

    def __init__(self, frame: _IntegerFrame, prefer: str, node_limit: Optional[int], stats: SolverStats):
        self.frame = frame
        self.prefer = prefer
        self.node_limit = node_limit
        self.stats = stats
        self.best_key = None
        self.best_sequence: Tuple[Tuple[int, int], ...] = ()

    def _pruned(self, sequence: List[Tuple[int, int]], end: int, rest: List[int], bound) -> bool:
        """True when no completion below this child can beat the incumbent.

        At an equal bound the only completion reaching it schedules every job
        of sequence and rest (weights are positive), and each of its starts is
        at least the fixed start or max(release, end). That set and start
        vector bound the tie-break key from below.
        """
        best_value = self.best_key[0]
        if bound != best_value:
            return bound < best_value
        frame = self.frame
        starts = {i: start for i, start in sequence}
        for k in rest:
            starts[k] = max(frame.release[k], end)
        members = sorted(starts, key=lambda i: frame.ids[i])
        floor_key = (bound, tuple(frame.ids[i] for i in members), tuple(starts[i] for i in members))
        return not _is_better(floor_key, self.best_key, self.prefer)

    def run(self) -> Tuple[Tuple[int, int], ...]:
        frame = self.frame
        candidates = [i for i in range(len(frame.jobs))
                      if max(frame.release[i], frame.floor) <= frame.latest[i]]
        self._visit(frame.floor, [], candidates)
        return self.best_sequence

    def _visit(self, finish: int, sequence: List[Tuple[int, int]], remaining: List[int]):
        frame = self.frame
        self.stats.nodes += 1
        if self.node_limit is not None and self.stats.nodes > self.node_limit:
            raise SolverGuardError(
                f"Branch-and-bound exceeded the node limit of {self.node_limit} ({NODE_LIMIT_ENV})")

        chosen = sorted(sequence, key=lambda item: frame.ids[item[0]])
        key = (frame.value_of([i for i, _ in chosen]),
               tuple(frame.ids[i] for i, _ in chosen),
               tuple(start for _, start in chosen))
        if _is_better(key, self.best_key, self.prefer):
            self.best_key = key
            self.best_sequence = tuple(sequence)

        order = sorted(remaining, key=lambda i: (max(frame.release[i], finish), frame.ids[i]))
        for j in order:
            start = max(frame.release[j], finish)
            end = start + frame.proc[j]
            rest = [k for k in remaining if k != j and frame.latest[k] >= end]
            sequence.append((j, start))
            # Exact for ints, correctly rounded for floats: a superset never
            # bounds below any of its subsets
            bound = frame.value_of([i for i, _ in sequence] + rest)
            if self._pruned(sequence, end, rest, bound):
                self.stats.prunes += 1
            else:
                self._visit(end, sequence, rest)
            sequence.pop()


def optimal_offline(instance: Instance, node_limit: Optional[int] = None, prefer: str = SMALLEST_IDS,
                    floor=0) -> Tuple[Schedule, SolverStats]:
    """Optimal offline schedule by branch-and-bound.

    Each node appends one more job in earliest-start form. A child is pruned
    when its value plus the weight of every remaining job that could still
    fit is below the best value found. At an equal bound the child is pruned
    unless the job set it must complete, with every start at its earliest,
    could still win the tie-break (smallest sorted id set, then earliest
    start vector).

    Args:
        instance: Jobs and weight model (the notice level is ignored)
        node_limit: Maximum nodes to visit; defaults to SCHED_SOLVER_NODE_LIMIT
        prefer: Tie-break policy among equal-value optima
        floor: Earliest time any job may start

    Returns:
        Tuple of (schedule, search statistics)

    Raises:
        SolverGuardError: the node limit was exceeded
    """
    if prefer not in TIE_BREAKS:
        raise ValueError(f"Unknown tie-break policy: {prefer}")
    if node_limit is None:
        node_limit = default_node_limit()

    stats = SolverStats()
    clock = time.perf_counter()
    frame = _IntegerFrame(instance.jobs, instance.weights, to_time(floor))
    sequence = _BranchAndBound(frame, prefer, node_limit, stats).run()
    stats.wall_time = time.perf_counter() - clock

    entries = tuple(ScheduleEntry(frame.ids[i], frame.to_time(start)) for i, start in sequence)
    value = _exact_value(instance.weights, [frame.jobs[i].p for i, _ in sequence])
    logger.debug(f"optimal_offline: {len(instance.jobs)} jobs, value {value}, "
                 f"{stats.nodes} nodes, {stats.prunes} prunes, {stats.wall_ms:.1f} ms")
    return Schedule(entries, value), stats
