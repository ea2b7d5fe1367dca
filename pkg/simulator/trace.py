"""
Trace and plan types for the online simulator.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Dict, List, Optional, Tuple, Union

from core.models import Job, ScheduleEntry
from core.weights import Weight, WeightModel


@dataclass(frozen=True)
class Plan:
    """Intended starts of an online algorithm; each new plan replaces the last one."""
    entries: Tuple[ScheduleEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: (e.start, e.job_id))))

    def __len__(self) -> int:
        return len(self.entries)

    def due_at(self, now: Fraction) -> List[ScheduleEntry]:
        return [entry for entry in self.entries if entry.start == now]

    def without(self, job_ids) -> "Plan":
        return Plan(tuple(entry for entry in self.entries if entry.job_id not in job_ids))


@dataclass(frozen=True)
class MachineState:
    """What an online algorithm may look at when asked for a plan."""
    now: Fraction
    weights: WeightModel
    pending: Tuple[Job, ...]
    running: Optional[ScheduleEntry] = None
    running_end: Optional[Fraction] = None

    @property
    def busy_until(self) -> Fraction:
        """First instant the machine is free (now when idle)."""
        if self.running_end is None:
            return self.now
        return max(self.running_end, self.now)


@dataclass(frozen=True)
class Announce:
    kind: ClassVar[str] = "announce"
    time: Fraction
    job: Job


@dataclass(frozen=True)
class Start:
    kind: ClassVar[str] = "start"
    time: Fraction
    job_id: int


@dataclass(frozen=True)
class Finish:
    kind: ClassVar[str] = "finish"
    time: Fraction
    job_id: int


@dataclass(frozen=True)
class Expire:
    kind: ClassVar[str] = "expire"
    time: Fraction
    job_id: int


@dataclass(frozen=True)
class Replan:
    kind: ClassVar[str] = "replan"
    time: Fraction
    plan: Tuple[ScheduleEntry, ...]


Event = Union[Announce, Start, Finish, Expire, Replan]


@dataclass
class SimulationTrace:
    """Time-ordered event history of one online run."""
    events: List[Event] = field(default_factory=list)
    value: Weight = Fraction(0)

    def record(self, event: Event) -> None:
        if self.events and event.time < self.events[-1].time:
            raise ValueError(f"Trace events must be time ordered: {event} after {self.events[-1]}")
        self.events.append(event)

    def of_kind(self, kind: str) -> List[Event]:
        return [event for event in self.events if event.kind == kind]

    def starts(self) -> Dict[int, Fraction]:
        """Executed start time per job id."""
        return {event.job_id: event.time for event in self.events if event.kind == Start.kind}

    def started_ids(self) -> Tuple[int, ...]:
        """Executed job ids in execution order."""
        return tuple(event.job_id for event in self.events if event.kind == Start.kind)

    def announced_jobs(self) -> List[Job]:
        """Every job in announcement order."""
        return [event.job for event in self.events if event.kind == Announce.kind]
