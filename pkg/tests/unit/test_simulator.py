"""
Tests for the event-driven simulator.
"""

from fractions import Fraction as F

import pytest

from core.errors import ContractViolationError, InvalidInstanceError
from core.models import Instance, Job, ScheduleEntry
from simulator.algorithms import AOffAlgorithm, GreedyAlgorithm
from simulator.engine import OnlineAlgorithm, simulate
from simulator.trace import Plan, SimulationTrace, Start


class FixedPlan(OnlineAlgorithm):
    """Returns the same plan at the first announcement."""
    name = "fixed"

    def __init__(self, *entries):
        self.plan = Plan(tuple(ScheduleEntry(job_id, start) for job_id, start in entries))

    def on_announce(self, now, jobs, state):
        return self.plan


def test_single_job_event_order(single_job):
    trace, schedule = simulate(single_job, AOffAlgorithm())
    assert [event.kind for event in trace.events] == ["announce", "replan", "start", "finish"]
    assert trace.starts() == {1: 1}
    assert trace.of_kind("finish")[0].time == 2
    assert schedule.value == 1
    assert trace.value == 1


def test_greedy_lets_short_job_expire():
    instance = Instance.build([Job(1, 0, 0, 2, 2), Job(2, 0, 0, 1, F(3, 2))], t=0)
    trace, schedule = simulate(instance, GreedyAlgorithm())
    assert trace.started_ids() == (1,)
    expired = trace.of_kind("expire")
    assert [(event.time, event.job_id) for event in expired] == [(2, 2)]
    assert schedule.value == 2


def test_run_is_deterministic(two_jobs):
    first, _ = simulate(two_jobs, AOffAlgorithm())
    second, _ = simulate(two_jobs, AOffAlgorithm())
    assert first.events == second.events


def test_invalid_instance_is_refused():
    instance = Instance.build([Job(1, 0, 0, 1, 2)], t=1)
    with pytest.raises(InvalidInstanceError):
        simulate(instance, AOffAlgorithm())


def test_plan_for_unannounced_job():
    instance = Instance.build([Job(1, 0, 0, 1, 2)], t=0)
    with pytest.raises(ContractViolationError, match="not been announced"):
        simulate(instance, FixedPlan((9, 0)))


def test_plan_outside_window():
    instance = Instance.build([Job(1, 0, 1, 1, 2)], t=0)
    with pytest.raises(ContractViolationError, match="window"):
        simulate(instance, FixedPlan((1, 0)))


def test_plan_with_overlap():
    instance = Instance.build([Job(1, 0, 0, 2, 5), Job(2, 0, 0, 2, 5)], t=0)
    with pytest.raises(ContractViolationError, match="overlap"):
        simulate(instance, FixedPlan((1, 0), (2, 1)))


def test_plan_in_the_past():
    instance = Instance.build([Job(1, 0, 0, 1, 5), Job(2, 2, 2, 1, 5)], t=0)

    class Stale(OnlineAlgorithm):
        def on_announce(self, now, jobs, state):
            return Plan((ScheduleEntry(jobs[0].id, 0),))

    with pytest.raises(ContractViolationError, match="past"):
        simulate(instance, Stale())


def test_plan_while_machine_busy():
    instance = Instance.build([Job(1, 0, 0, 2, 5), Job(2, 1, 1, 1, 5)], t=0)

    class Impatient(OnlineAlgorithm):
        def on_announce(self, now, jobs, state):
            return Plan((ScheduleEntry(jobs[0].id, now),))

    with pytest.raises(ContractViolationError, match="runs until"):
        simulate(instance, Impatient())


def test_trace_rejects_time_travel():
    trace = SimulationTrace()
    trace.record(Start(F(2), 1))
    with pytest.raises(ValueError):
        trace.record(Start(F(1), 2))


def test_trace_records_every_announced_job(two_jobs):
    trace, _ = simulate(two_jobs, AOffAlgorithm())
    announced = trace.announced_jobs()
    assert {job.id: job for job in announced} == two_jobs.by_id
    assert [job.a for job in announced] == sorted(job.a for job in announced)
