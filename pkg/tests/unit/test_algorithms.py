"""
Tests for A_Off and the greedy baseline.
"""

from fractions import Fraction as F

import pytest

from adversaries.generator import random_instance
from core.errors import ContractViolationError
from core.models import Instance, Job, competitive_bound
from core.validation import is_feasible_schedule
from simulator.algorithms import (AOffAlgorithm, GreedyAlgorithm, a_off_replan, make_algorithm, run_a_off,
                                  run_greedy)
from solver.offline_solver import optimal_offline


def test_replan_clips_releases_to_busy_machine():
    jobs = [Job(1, 0, 0, 1, 3), Job(2, 0, 0, 2, 3)]
    plan = a_off_replan(jobs, F(0), F(1))
    assert [(entry.job_id, entry.start) for entry in plan.entries] == [(2, 1)]


def test_replan_drops_jobs_that_no_longer_fit():
    plan = a_off_replan([Job(1, 0, 0, 1, 2)], F(0), F(3, 2))
    assert len(plan) == 0


def test_replan_refuses_future_jobs():
    with pytest.raises(ContractViolationError):
        a_off_replan([Job(1, 2, 2, 1, 5)], F(1), F(1))


def test_greedy_takes_heaviest():
    instance = Instance.build([Job(1, 0, 0, 1, 1), Job(2, 0, 0, 2, 2)], t=0)
    trace, schedule = run_greedy(instance)
    assert trace.started_ids() == (2,)
    assert schedule.value == 2


def test_a_off_runs_the_two_job_example(two_jobs):
    trace, schedule = run_a_off(two_jobs)
    assert schedule.starts == {1: 0, 2: 2}
    assert schedule.value == 3


def test_make_algorithm_names():
    assert make_algorithm("a_off").name == "a_off"
    assert make_algorithm("a_off_eager").name == "a_off_eager"
    assert isinstance(make_algorithm("greedy"), GreedyAlgorithm)
    with pytest.raises(ValueError):
        make_algorithm("clairvoyant")
    with pytest.raises(ValueError):
        AOffAlgorithm(prefer="random")


@pytest.mark.parametrize("seed", range(20))
def test_a_off_meets_competitive_bound(seed):
    t = F(1, 2)
    instance = random_instance(6, t, seed=seed)
    _, schedule = run_a_off(instance)
    optimum, _ = optimal_offline(instance)
    assert is_feasible_schedule(instance, schedule)
    assert schedule.value <= optimum.value
    assert schedule.value >= competitive_bound(t) * optimum.value


@pytest.mark.parametrize("seed", range(10))
def test_a_off_without_notice_matches_offline_when_all_known(seed):
    # Everything announced at time 0 makes the first plan optimal
    base = random_instance(5, 0, seed=seed)
    instance = Instance.build([Job(job.id, 0, job.r, job.p, job.d) for job in base.jobs], t=0)
    _, schedule = run_a_off(instance)
    assert schedule.value == optimal_offline(instance)[0].value
