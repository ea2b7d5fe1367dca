"""
Validation predicates for instances and schedules.
Instance problems are reported as data; schedule problems can raise.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from core.errors import InfeasibleScheduleError, InvalidInstanceError, MalformedInputError
from core.models import Instance, Schedule
from core.weights import Weight

logger = logging.getLogger(__name__)

# Violation kinds
EARLY_RELEASE = "release-before-announcement"
MISSED_DEADLINE = "deadline-before-completion"
NOTICE_DEFICIT = "notice-deficit"
EMPTY_JOB = "nonpositive-processing-time"
DUPLICATE_ID = "duplicate-id"
OUT_OF_ORDER = "out-of-announcement-order"


@dataclass(frozen=True)
class Violation:
    """A single broken instance constraint, with the offending quantity."""
    job_id: int
    kind: str
    amount: Optional[Fraction] = None
    detail: str = ""

    def __str__(self) -> str:
        return f"job {self.job_id}: {self.kind} {self.detail}".rstrip()


def validate_instance(instance: Instance) -> List[Violation]:
    """Report every job breaking a <= r, r + p <= d, r - a >= t*p or p > 0.

    Duplicate ids and jobs out of announcement order are reported too.

    Args:
        instance: Instance to check

    Returns:
        List of violations, empty for a valid instance
    """
    violations = []
    seen = set()
    previous_a = None
    for job in instance.jobs:
        if job.id in seen:
            violations.append(Violation(job.id, DUPLICATE_ID, detail="id appears more than once"))
        seen.add(job.id)

        if previous_a is not None and job.a < previous_a:
            violations.append(Violation(job.id, OUT_OF_ORDER, previous_a - job.a,
                                        f"announced at {job.a} after a job announced at {previous_a}"))
        previous_a = job.a if previous_a is None else max(previous_a, job.a)

        if job.p <= 0:
            violations.append(Violation(job.id, EMPTY_JOB, job.p, "p must be positive"))
        if job.r < job.a:
            violations.append(Violation(job.id, EARLY_RELEASE, job.a - job.r,
                                        f"released at {job.r} before announcement at {job.a}"))
        if job.r + job.p > job.d:
            violations.append(Violation(job.id, MISSED_DEADLINE, job.r + job.p - job.d,
                                        f"r + p = {job.r + job.p} exceeds d = {job.d}"))
        required = instance.t * job.p
        if job.notice < required:
            violations.append(Violation(job.id, NOTICE_DEFICIT, required - job.notice,
                                        f"r - a = {job.notice} but t*p = {required}"))
    return violations


def require_valid(instance: Instance) -> None:
    """Raise InvalidInstanceError unless the instance validates cleanly."""
    violations = validate_instance(instance)
    if violations:
        raise InvalidInstanceError(violations)


def schedule_problems(instance: Instance, schedule: Schedule) -> List[str]:
    """Describe every way the schedule is infeasible for the instance."""
    problems = []
    seen = set()
    for entry in schedule.entries:
        job = instance.job(entry.job_id)
        if entry.job_id in seen:
            problems.append(f"job {entry.job_id} scheduled twice")
        seen.add(entry.job_id)
        if not job.fits_at(entry.start):
            problems.append(f"job {job.id} at {entry.start} leaves its window [{job.r}, {job.d}]")

    # Entries are kept in start order, so overlap only needs checking between neighbours.
    intervals = schedule.intervals(instance)
    for (first, _, first_end), (second, second_start, _) in zip(intervals, intervals[1:]):
        if second_start < first_end:
            problems.append(f"job {second} starts at {second_start} before job {first} ends at {first_end}")
    return problems


def is_feasible_schedule(instance: Instance, schedule: Schedule) -> bool:
    """True iff every window holds and execution intervals [s, s+p) are disjoint.

    Raises:
        MalformedInputError: an entry names a job missing from the instance
    """
    for entry in schedule.entries:
        if entry.job_id not in instance.by_id:
            raise MalformedInputError(f"Schedule references unknown job id {entry.job_id}")
    return not schedule_problems(instance, schedule)


def schedule_value(instance: Instance, schedule: Schedule) -> Weight:
    """Total weight of the scheduled jobs, exact under exact weight models.

    Raises:
        InfeasibleScheduleError: the schedule is not feasible
    """
    if not is_feasible_schedule(instance, schedule):
        problems = schedule_problems(instance, schedule)
        raise InfeasibleScheduleError(f"Cannot value an infeasible schedule: {'; '.join(problems)}")
    total = instance.weights.zero()
    for entry in schedule.entries:
        total += instance.weights.evaluate(instance.job(entry.job_id).p)
    return total
