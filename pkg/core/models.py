"""
Domain model for the scheduling lab.
Exact rational time points, jobs, instances and schedules.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from core.errors import MalformedInputError, ParameterError
from core.weights import Weight, WeightModel

logger = logging.getLogger(__name__)

# Times are Fractions; floats never enter schedule arithmetic.
TimeLike = Union[Fraction, int, str, Tuple[int, int]]

ZERO = Fraction(0)


def to_time(value: TimeLike) -> Fraction:
    """Convert a value to an exact nonnegative rational.

    Accepts Fractions, ints, "num/den" strings and (num, den) pairs.
    Floats are refused so that no rounding can sneak into time arithmetic.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise MalformedInputError(f"Time values must be exact rationals, got {value!r}")
    try:
        if isinstance(value, tuple):
            num, den = value
            result = Fraction(int(num), int(den))
        else:
            result = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise MalformedInputError(f"Cannot read {value!r} as a rational: {e}")
    if result < 0:
        raise MalformedInputError(f"Time values must be nonnegative, got {result}")
    return result


def format_rational(value: Fraction) -> str:
    """Render as num/den (always with a denominator, e.g. 3/1)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def competitive_bound(t) -> Fraction:
    """Best guaranteed ratio with t-advance-notice: min(t/(2t+1), 1/3)."""
    t = Fraction(t)
    if t < 0:
        raise ParameterError(f"Notice level must be nonnegative, got {t}")
    return min(t / (2 * t + 1), Fraction(1, 3))


@dataclass(frozen=True)
class Job:
    """A job (a, r, p, d): announced at a, released at r, runs p, due by d."""
    id: int
    a: Fraction
    r: Fraction
    p: Fraction
    d: Fraction

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int):
            raise MalformedInputError(f"Job id must be an integer, got {self.id!r}")
        for name in ("a", "r", "p", "d"):
            object.__setattr__(self, name, to_time(getattr(self, name)))

    @property
    def notice(self) -> Fraction:
        """Time between announcement and release."""
        return self.r - self.a

    @property
    def latest_start(self) -> Fraction:
        """Last start time that still meets the deadline."""
        return self.d - self.p

    def fits_at(self, start: Fraction) -> bool:
        """True if the job may start at the given time."""
        return self.r <= start and start + self.p <= self.d

    def with_release(self, r: Fraction) -> "Job":
        """Copy of the job with another release time."""
        return Job(self.id, self.a, r, self.p, self.d)

    def scaled(self, c: Fraction) -> "Job":
        """Copy with every time multiplied by c."""
        return Job(self.id, self.a * c, self.r * c, self.p * c, self.d * c)


def sort_jobs(jobs: Iterable[Job]) -> Tuple[Job, ...]:
    """Order jobs by announcement time, keeping the given order among ties."""
    return tuple(sorted(jobs, key=lambda job: job.a))


@dataclass(frozen=True)
class Instance:
    """A job sequence with its declared notice level t and weight model."""
    jobs: Tuple[Job, ...] = ()
    t: Fraction = ZERO
    weights: WeightModel = field(default_factory=WeightModel.proportional)

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        object.__setattr__(self, "t", to_time(self.t))

    @classmethod
    def build(cls, jobs: Iterable[Job], t: TimeLike = 0, weights: Optional[WeightModel] = None) -> "Instance":
        """Create an instance with jobs sorted by announcement time."""
        return cls(sort_jobs(jobs), to_time(t), weights or WeightModel.proportional())

    def __len__(self) -> int:
        return len(self.jobs)

    def __iter__(self) -> Iterator[Job]:
        return iter(self.jobs)

    @cached_property
    def by_id(self) -> Dict[int, Job]:
        return {job.id: job for job in self.jobs}

    def job(self, job_id: int) -> Job:
        try:
            return self.by_id[job_id]
        except KeyError:
            raise MalformedInputError(f"Unknown job id {job_id}")

    def notice_level(self) -> Optional[Fraction]:
        """Largest t for which every job has t-advance-notice (None when no job has p > 0)."""
        levels = [job.notice / job.p for job in self.jobs if job.p > 0]
        return min(levels) if levels else None

    def scaled(self, c: TimeLike) -> "Instance":
        """Multiply every time of every job by the positive rational c."""
        c = to_time(c)
        if c <= 0:
            raise ParameterError(f"Scale factor must be positive, got {c}")
        return Instance(tuple(job.scaled(c) for job in self.jobs), self.t, self.weights)


@dataclass(frozen=True, order=True)
class ScheduleEntry:
    """A commitment to start a job at a given time."""
    job_id: int
    start: Fraction

    def __post_init__(self):
        object.__setattr__(self, "start", to_time(self.start))


@dataclass(frozen=True)
class Schedule:
    """A set of (job, start) commitments and its total weight."""
    entries: Tuple[ScheduleEntry, ...] = ()
    value: Weight = ZERO

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: (e.start, e.job_id))))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ScheduleEntry]:
        return iter(self.entries)

    @cached_property
    def starts(self) -> Dict[int, Fraction]:
        """Start time per job id."""
        return {entry.job_id: entry.start for entry in self.entries}

    def job_ids(self) -> Tuple[int, ...]:
        """Scheduled job ids in ascending order."""
        return tuple(sorted(self.starts))

    def execution_order(self) -> Tuple[int, ...]:
        """Scheduled job ids in order of start time."""
        return tuple(entry.job_id for entry in self.entries)

    def start_of(self, job_id: int) -> Optional[Fraction]:
        """Start of the job, or None if it is not scheduled."""
        return self.starts.get(job_id)

    def intervals(self, instance: Instance) -> List[Tuple[int, Fraction, Fraction]]:
        """(job id, start, end) triples in start order."""
        return [(e.job_id, e.start, e.start + instance.job(e.job_id).p) for e in self.entries]
