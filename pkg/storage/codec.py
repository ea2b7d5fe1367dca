"""
JSON storage for the scheduling lab.
Reads and writes instances, schedules, simulation traces, charge reports and adversary outcomes.
Rationals are stored as {"num": N, "den": D} pairs in lowest terms.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from core.errors import MalformedInputError
from core.models import Instance, Job, Schedule, ScheduleEntry
from core.weights import POWER, PROPORTIONAL, UNWEIGHTED, Weight, WeightModel
from simulator.trace import Announce, Event, Expire, Finish, Replan, SimulationTrace, Start

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def rational_to_json(value: Fraction) -> Dict[str, int]:
    """Encode a rational as {"num", "den"} in lowest terms."""
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator}


def rational_from_json(obj: Any, where: str = "value") -> Fraction:
    """Decode a {"num", "den"} pair or a bare integer.

    Args:
        obj: Parsed JSON value
        where: Field path used in error messages

    Returns:
        The exact rational

    Raises:
        MalformedInputError: wrong shape, non-integer parts or a zero denominator
    """
    if isinstance(obj, bool) or not isinstance(obj, (dict, int)):
        raise MalformedInputError(f"{where}: expected {{\"num\", \"den\"}} or an integer, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    try:
        num, den = obj["num"], obj["den"]
    except KeyError as e:
        raise MalformedInputError(f"{where}: missing field {e}")
    if any(isinstance(x, bool) or not isinstance(x, int) for x in (num, den)):
        raise MalformedInputError(f"{where}: num and den must be integers, got {num!r}/{den!r}")
    if den == 0:
        raise MalformedInputError(f"{where}: zero denominator")
    return Fraction(num, den)


def weight_value_to_json(value: Weight) -> Any:
    """Floats pass through; exact weights become rationals."""
    if isinstance(value, float):
        return value
    return rational_to_json(value)


def weight_value_from_json(obj: Any, where: str = "value") -> Weight:
    if isinstance(obj, float):
        return obj
    return rational_from_json(obj, where)


def weights_to_json(model: WeightModel) -> Any:
    """Encode as "proportional", "unweighted" or {"power": {"k": ...}}."""
    if model.kind == POWER:
        return {"power": {"k": model.exponent}}
    return model.kind


def weights_from_json(obj: Any) -> WeightModel:
    """Decode a weight model written by weights_to_json.

    Raises:
        MalformedInputError: unknown model or non-numeric exponent
    """
    if obj == PROPORTIONAL:
        return WeightModel.proportional()
    if obj == UNWEIGHTED:
        return WeightModel.unweighted()
    if isinstance(obj, dict) and isinstance(obj.get("power"), dict) and "k" in obj["power"]:
        k = obj["power"]["k"]
        if isinstance(k, bool) or not isinstance(k, (int, float)):
            raise MalformedInputError(f"weights: power exponent must be a number, got {k!r}")
        return WeightModel.power(float(k))
    raise MalformedInputError(f"weights: expected \"proportional\", \"unweighted\" or {{\"power\": {{\"k\": ...}}}}, got {obj!r}")


def job_to_json(job: Job) -> Dict[str, Any]:
    return {"id": job.id, "a": rational_to_json(job.a), "r": rational_to_json(job.r),
            "p": rational_to_json(job.p), "d": rational_to_json(job.d)}


def job_from_json(obj: Any, index: int = 0) -> Job:
    """Decode one job object.

    Args:
        obj: Parsed JSON object with id, a, r, p and d
        index: Position in the jobs list, for error messages

    Returns:
        The job
    """
    if not isinstance(obj, dict):
        raise MalformedInputError(f"jobs[{index}]: expected an object, got {obj!r}")
    missing = [name for name in ("id", "a", "r", "p", "d") if name not in obj]
    if missing:
        raise MalformedInputError(f"jobs[{index}]: missing fields {missing}")
    times = {name: rational_from_json(obj[name], f"jobs[{index}].{name}") for name in ("a", "r", "p", "d")}
    return Job(obj["id"], **times)


def instance_to_json(instance: Instance) -> Dict[str, Any]:
    """Notice level, weight model and jobs in announcement order."""
    return {"t": rational_to_json(instance.t), "weights": weights_to_json(instance.weights),
            "jobs": [job_to_json(job) for job in instance.jobs]}


def instance_from_json(obj: Any) -> Instance:
    """Decode an instance; a missing t means 0 and missing weights mean proportional.

    Raises:
        MalformedInputError: the object or one of its jobs is malformed
    """
    if not isinstance(obj, dict):
        raise MalformedInputError(f"Instance must be a JSON object, got {type(obj).__name__}")
    jobs = obj.get("jobs", [])
    if not isinstance(jobs, list):
        raise MalformedInputError("jobs: expected a list")
    return Instance.build((job_from_json(job, i) for i, job in enumerate(jobs)),
                          rational_from_json(obj.get("t", 0), "t"),
                          weights_from_json(obj.get("weights", PROPORTIONAL)))


def schedule_to_json(schedule: Schedule) -> Dict[str, Any]:
    return {"value": weight_value_to_json(schedule.value),
            "entries": [{"id": e.job_id, "start": rational_to_json(e.start)} for e in schedule.entries]}


def schedule_from_json(obj: Any) -> Schedule:
    """Decode a schedule; the stored value is read back as written, not recomputed."""
    if not isinstance(obj, dict) or not isinstance(obj.get("entries", []), list):
        raise MalformedInputError("Schedule must be an object with an \"entries\" list")
    entries = []
    for i, entry in enumerate(obj.get("entries", [])):
        if not isinstance(entry, dict) or "id" not in entry or "start" not in entry:
            raise MalformedInputError(f"entries[{i}]: expected {{\"id\", \"start\"}}, got {entry!r}")
        entries.append(ScheduleEntry(entry["id"], rational_from_json(entry["start"], f"entries[{i}].start")))
    return Schedule(tuple(entries), weight_value_from_json(obj.get("value", 0), "value"))


def parse_json(text: str, source: str = "<input>") -> Any:
    """json.loads that reports the line and column of a syntax error."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"{source}: {e.msg}", line=e.lineno, column=e.colno)


def read_json(path: PathLike) -> Any:
    """Read and parse a JSON file.

    Raises:
        OSError: the file cannot be read (logged first)
        MalformedInputError: the text is not valid JSON
    """
    try:
        text = Path(path).read_text()
    except OSError as e:
        logger.error(f"Error reading {path}: {e}")
        raise
    return parse_json(text, str(path))


def write_json(path: PathLike, obj: Any) -> None:
    """Write indented JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n")
    logger.info(f"Wrote {path}")


def load_instance(path: PathLike) -> Instance:
    """Read an instance file."""
    return instance_from_json(read_json(path))


def save_instance(path: PathLike, instance: Instance) -> None:
    """Write an instance file."""
    write_json(path, instance_to_json(instance))


def load_schedule(path: PathLike) -> Schedule:
    """Read a schedule file."""
    return schedule_from_json(read_json(path))


def save_schedule(path: PathLike, schedule: Schedule) -> None:
    """Write a schedule file."""
    write_json(path, schedule_to_json(schedule))


def event_to_json(event: Event) -> Dict[str, Any]:
    """One trace event with a fixed field order: time, kind, then the payload."""
    record: Dict[str, Any] = {"time": rational_to_json(event.time), "kind": event.kind}
    if isinstance(event, Announce):
        record["job"] = job_to_json(event.job)
    elif isinstance(event, Replan):
        record["plan"] = [{"id": e.job_id, "start": rational_to_json(e.start)} for e in event.plan]
    else:
        record["id"] = event.job_id
    return record


def event_from_json(record: Any, line: int) -> Event:
    if not isinstance(record, dict) or "time" not in record or "kind" not in record:
        raise MalformedInputError("Trace event needs \"time\" and \"kind\"", line=line, column=1)
    time = rational_from_json(record["time"], f"line {line}: time")
    kind = record["kind"]
    if kind == Announce.kind:
        return Announce(time, job_from_json(record.get("job")))
    if kind == Replan.kind:
        return Replan(time, tuple(ScheduleEntry(e["id"], rational_from_json(e["start"])) for e in record.get("plan", [])))
    events = {Start.kind: Start, Finish.kind: Finish, Expire.kind: Expire}
    if kind not in events:
        raise MalformedInputError(f"Unknown trace event kind {kind!r}", line=line, column=1)
    return events[kind](time, record["id"])


def dumps_trace(trace: SimulationTrace) -> str:
    """JSON lines: one event per line, then a final line carrying the value."""
    lines = [json.dumps(event_to_json(event)) for event in trace.events]
    lines.append(json.dumps({"kind": "value", "value": weight_value_to_json(trace.value)}))
    return "\n".join(lines) + "\n"


def loads_trace(text: str) -> SimulationTrace:
    """Parse JSON lines written by dumps_trace; blank lines are skipped.

    Raises:
        MalformedInputError: a line is not JSON or not a known event, with its line number
    """
    trace = SimulationTrace()
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        record = parse_json(line, f"trace line {number}")
        if isinstance(record, dict) and record.get("kind") == "value":
            trace.value = weight_value_from_json(record.get("value"), f"line {number}: value")
            continue
        trace.record(event_from_json(record, number))
    return trace


def save_trace(path: PathLike, trace: SimulationTrace) -> None:
    """Write a trace as JSON lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_trace(trace))
    logger.info(f"Wrote {path}")


def charge_report_to_json(report, violations: Optional[Iterable] = None) -> Dict[str, Any]:
    """Charges grouped per ALG job, orphans, and any claim findings."""
    per_job = []
    for job_id, p in sorted(report.alg_spans.items()):
        per_job.append({
            "id": job_id,
            "p": rational_to_json(p),
            "charges": [{"opt_id": c.opt_job_id, "span": rational_to_json(c.span), "label": c.label}
                        for c in report.charges_for(job_id)],
            "total": rational_to_json(report.total_for(job_id)),
        })
    obj: Dict[str, Any] = {
        "t": rational_to_json(report.t),
        "alg_jobs": per_job,
        "orphans": [{"opt_id": c.opt_job_id, "span": rational_to_json(c.span)} for c in report.orphans],
        "total": rational_to_json(report.total()),
    }
    if violations is not None:
        obj["violations"] = [{"claim": v.claim, "job": v.job_id, "lhs": rational_to_json(v.lhs),
                              "rhs": rational_to_json(v.rhs), "severity": v.severity} for v in violations]
    return obj


def outcome_to_json(outcome, target: Optional[Weight] = None) -> Dict[str, Any]:
    """Adversary run: values, ratio, the emitted instance, both schedules and solver nodes.

    Args:
        outcome: AdversaryOutcome of the run
        target: Ratio the construction aims for, if known
    """
    obj = {
        "alg": weight_value_to_json(outcome.alg_value),
        "opt": weight_value_to_json(outcome.opt_value),
        "ratio": weight_value_to_json(outcome.ratio),
        "unbounded": outcome.unbounded,
        "instance": instance_to_json(outcome.instance),
        "alg_schedule": schedule_to_json(outcome.alg_schedule),
        "opt_schedule": schedule_to_json(outcome.opt_schedule),
        "nodes": outcome.stats.nodes,
    }
    if target is not None:
        obj["target"] = weight_value_to_json(target)
    return obj
