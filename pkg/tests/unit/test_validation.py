"""
Tests for instance validation and schedule feasibility.
"""

from fractions import Fraction as F

import pytest

from adversaries.generator import random_instance
from core.errors import InfeasibleScheduleError, InvalidInstanceError, MalformedInputError
from core.models import Instance, Job, Schedule, ScheduleEntry
from core.validation import (DUPLICATE_ID, EARLY_RELEASE, EMPTY_JOB, MISSED_DEADLINE, NOTICE_DEFICIT,
                             OUT_OF_ORDER, is_feasible_schedule, require_valid, schedule_value,
                             validate_instance)
from core.weights import WeightModel
from solver.offline_solver import optimal_offline


def test_valid_instance_has_no_violations(two_jobs):
    assert validate_instance(two_jobs) == []
    require_valid(two_jobs)


def test_notice_deficit_reports_amount():
    instance = Instance.build([Job(1, 0, F(1, 2), 1, 3)], t=1)
    violations = validate_instance(instance)
    assert [(v.kind, v.amount) for v in violations] == [(NOTICE_DEFICIT, F(1, 2))]
    with pytest.raises(InvalidInstanceError) as info:
        require_valid(instance)
    assert info.value.violations == violations


def test_each_violation_kind():
    instance = Instance((Job(1, 2, 1, 1, 5), Job(2, 0, 0, 3, 2), Job(2, 0, 0, 0, 1)), 0)
    kinds = {v.kind for v in validate_instance(instance)}
    assert kinds == {EARLY_RELEASE, NOTICE_DEFICIT, MISSED_DEADLINE, DUPLICATE_ID, EMPTY_JOB, OUT_OF_ORDER}


def test_notice_is_monotone_in_t():
    instance = Instance.build([Job(1, 0, 1, 2, 5), Job(2, 1, 3, 2, 8)], t=F(1, 2))
    assert validate_instance(instance) == []
    for t in (F(0), F(1, 4), F(1, 3)):
        assert validate_instance(Instance(instance.jobs, t)) == []
    assert validate_instance(Instance(instance.jobs, F(3, 4)))


def test_abutting_jobs_are_feasible(two_jobs):
    schedule = Schedule((ScheduleEntry(1, 0), ScheduleEntry(2, 2)))
    assert is_feasible_schedule(two_jobs, schedule)
    assert schedule_value(two_jobs, schedule) == 3


def test_overlap_and_window_breaks(two_jobs):
    overlapping = Schedule((ScheduleEntry(1, 0), ScheduleEntry(2, 1)))
    assert not is_feasible_schedule(two_jobs, overlapping)
    late = Schedule((ScheduleEntry(1, 1),))
    assert not is_feasible_schedule(two_jobs, late)
    with pytest.raises(InfeasibleScheduleError):
        schedule_value(two_jobs, late)


def test_unknown_job_in_schedule(two_jobs):
    with pytest.raises(MalformedInputError):
        is_feasible_schedule(two_jobs, Schedule((ScheduleEntry(7, 0),)))


def test_value_under_each_model():
    jobs = [Job(1, 0, 0, 2, 2), Job(2, 0, 0, 1, 4)]
    schedule = Schedule((ScheduleEntry(1, 0), ScheduleEntry(2, 2)))
    assert schedule_value(Instance.build(jobs, 0, WeightModel.unweighted()), schedule) == 2
    assert schedule_value(Instance.build(jobs, 0, WeightModel.power(2)), schedule) == pytest.approx(5.0)
    assert schedule_value(Instance.build(jobs, 0), Schedule()) == 0


@pytest.mark.parametrize("seed", range(10))
def test_value_adds_over_disjoint_parts(seed):
    instance = random_instance(7, 1, seed=seed)
    schedule, _ = optimal_offline(instance)
    first = Schedule(schedule.entries[::2])
    second = Schedule(schedule.entries[1::2])
    assert schedule_value(instance, first) + schedule_value(instance, second) == schedule_value(instance, schedule)
