"""
Event-driven continuous-time simulator for online scheduling.
Times are exact rationals; events at the same instant run in a fixed order.
"""

import logging
from abc import ABC, abstractmethod
from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from core.errors import ContractViolationError
from core.models import Instance, Job, Schedule, ScheduleEntry, ZERO
from core.validation import require_valid, schedule_value
from core.weights import WeightModel
from simulator.trace import (Announce, Expire, Finish, MachineState, Plan, Replan,
                             SimulationTrace, Start)

logger = logging.getLogger(__name__)


class OnlineAlgorithm(ABC):
    """An online scheduler driven by announcements and wake-ups.

    Algorithms only see announced jobs through MachineState, and a start
    that has been executed can never be withdrawn.
    """
    name = "online"

    @abstractmethod
    def on_announce(self, now: Fraction, jobs: Tuple[Job, ...], state: MachineState) -> Optional[Plan]:
        """Called with the batch of jobs announced at now; returns a new plan or None to keep the old one."""

    def on_wake(self, now: Fraction, state: MachineState) -> Optional[Plan]:
        """Called when the machine becomes idle; returns a new plan or None."""
        return None


class JobSource(ABC):
    """Supplies announcements to the simulator."""

    def poll(self, trace: SimulationTrace, now: Fraction) -> None:
        """Give the source a chance to react to the trace so far."""

    @abstractmethod
    def due(self, now: Fraction) -> List[Job]:
        """Pop the jobs announced exactly at now."""

    @abstractmethod
    def next_time(self) -> Optional[Fraction]:
        """Announcement time of the next queued job."""


class StaticSource(JobSource):
    """Announces the jobs of a fixed instance in order."""

    def __init__(self, jobs: Iterable[Job]):
        self.queue = deque(sorted(jobs, key=lambda job: job.a))

    def due(self, now: Fraction) -> List[Job]:
        batch = []
        while self.queue and self.queue[0].a == now:
            batch.append(self.queue.popleft())
        return batch

    def next_time(self) -> Optional[Fraction]:
        return self.queue[0].a if self.queue else None


class Simulator:
    """Runs one online algorithm against one job source.

    At each event time the order is: finish the running job, expire jobs
    that can no longer meet their deadline, wake an idle machine, execute a
    planned start, deliver the announcement batch, then execute a start the
    new plan put at the current instant.
    """

    def __init__(self, algorithm: OnlineAlgorithm, weights: WeightModel, source: JobSource, t=ZERO):
        self.algorithm = algorithm
        self.weights = weights
        self.source = source
        self.t = Fraction(t)
        self.trace = SimulationTrace(value=weights.zero())
        self.known: Dict[int, Job] = {}
        self.pending: Dict[int, Job] = {}
        self.executed: List[ScheduleEntry] = []
        self.plan = Plan()
        self.running: Optional[ScheduleEntry] = None
        self.running_end: Optional[Fraction] = None

    def state(self, now: Fraction) -> MachineState:
        return MachineState(
            now=now,
            weights=self.weights,
            pending=tuple(sorted(self.pending.values(), key=lambda job: job.id)),
            running=self.running,
            running_end=self.running_end,
        )

    def run(self) -> Tuple[SimulationTrace, Schedule]:
        now = ZERO
        while True:
            self._step(now)
            upcoming = self._next_event_time()
            if upcoming is None:
                # Quiescent: nothing will happen unless the source has more to say
                self.source.poll(self.trace, now)
                upcoming = self._next_event_time()
                if upcoming is None:
                    break
            now = upcoming

        instance = Instance(tuple(self.known.values()), self.t, self.weights)
        schedule = Schedule(tuple(self.executed))
        value = schedule_value(instance, schedule)
        self.trace.value = value
        logger.debug(f"{self.algorithm.name}: {len(self.executed)} of {len(self.known)} jobs run, value {value}")
        return self.trace, Schedule(schedule.entries, value)

    def _next_event_time(self) -> Optional[Fraction]:
        times = []
        if self.running_end is not None:
            times.append(self.running_end)
        times.extend(entry.start for entry in self.plan.entries)
        upcoming = self.source.next_time()
        if upcoming is not None:
            times.append(upcoming)
        return min(times) if times else None

    def _step(self, now: Fraction) -> None:
        finished = False
        if self.running is not None and self.running_end == now:
            self.trace.record(Finish(now, self.running.job_id))
            self.running, self.running_end = None, None
            finished = True

        self._expire(now)
        if finished:
            self._apply(self.algorithm.on_wake(now, self.state(now)), now)
        self._start_due(now)

        # An adaptive source may react to a start made at this same instant
        while True:
            self.source.poll(self.trace, now)
            batch = self.source.due(now)
            if not batch:
                break
            for job in batch:
                if job.id in self.known:
                    raise ContractViolationError("Job id announced twice", job)
                self.trace.record(Announce(now, job))
                self.known[job.id] = job
                self.pending[job.id] = job
            self._apply(self.algorithm.on_announce(now, tuple(batch), self.state(now)), now)
            self._start_due(now)

    def _expire(self, now: Fraction) -> None:
        expired = [job for job in self.pending.values() if now + job.p > job.d]
        for job in sorted(expired, key=lambda job: job.id):
            self.trace.record(Expire(now, job.id))
            del self.pending[job.id]
        if expired:
            self.plan = self.plan.without({job.id for job in expired})

    def _start_due(self, now: Fraction) -> None:
        if self.running is not None:
            return
        due = self.plan.due_at(now)
        if not due:
            return
        entry = due[0]
        job = self.pending.pop(entry.job_id)
        self.trace.record(Start(now, job.id))
        self.executed.append(entry)
        self.running, self.running_end = entry, now + job.p
        self.plan = self.plan.without({job.id})

    def _apply(self, plan: Optional[Plan], now: Fraction) -> None:
        if plan is None:
            return
        self._check_plan(plan, now)
        self.plan = plan
        self.trace.record(Replan(now, plan.entries))
        logger.debug(f"t={now}: {self.algorithm.name} plans {[(e.job_id, str(e.start)) for e in plan.entries]}")

    def _check_plan(self, plan: Plan, now: Fraction) -> None:
        started = {entry.job_id for entry in self.executed}
        seen = set()
        previous_end = None
        for entry in plan.entries:
            if entry.job_id in seen:
                raise ContractViolationError("Plan schedules a job twice", entry)
            seen.add(entry.job_id)
            if entry.job_id in started:
                raise ContractViolationError("Plan restarts a job that already ran", entry)
            job = self.pending.get(entry.job_id)
            if job is None:
                reason = "a job that expired" if entry.job_id in self.known else "a job that has not been announced"
                raise ContractViolationError(f"Plan references {reason}", entry)
            if entry.start < now:
                raise ContractViolationError(f"Plan starts a job in the past (now = {now})", entry)
            if self.running_end is not None and entry.start < self.running_end:
                raise ContractViolationError(
                    f"Plan starts a job while job {self.running.job_id} runs until {self.running_end}", entry)
            if not job.fits_at(entry.start):
                raise ContractViolationError(f"Plan leaves the window [{job.r}, {job.d}] of job {job.id}", entry)
            if previous_end is not None and entry.start < previous_end:
                raise ContractViolationError("Plan entries overlap", entry)
            previous_end = entry.start + job.p


def simulate(instance: Instance, algorithm: OnlineAlgorithm) -> Tuple[SimulationTrace, Schedule]:
    """Run an online algorithm on a fixed instance.

    Raises:
        InvalidInstanceError: the instance fails validation
        ContractViolationError: the algorithm returned an unacceptable plan
    """
    require_valid(instance)
    simulator = Simulator(algorithm, instance.weights, StaticSource(instance.jobs), instance.t)
    return simulator.run()
