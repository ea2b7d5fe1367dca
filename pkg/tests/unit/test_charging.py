"""
Tests for the charging diagnostic.
"""

from fractions import Fraction as F

import pytest

from adversaries.constructions import proportional_lb_adversary
from adversaries.driver import run_against_adversary
from adversaries.generator import random_instance
from charging.charging_report import (CLAIM_AGGREGATE, CLAIM_B, CLAIM_UNMATCHED, ERROR, LABEL_A, LABEL_B,
                                      LABEL_C, LABEL_D, LABEL_E, build_charging, check_claims, conflicts,
                                      overlap)
from core.errors import ParameterError
from core.models import Instance, Job, Schedule, ScheduleEntry
from core.weights import WeightModel
from simulator.algorithms import AOffAlgorithm, run_a_off
from solver.offline_solver import optimal_offline


def schedule(*pairs):
    return Schedule(tuple(ScheduleEntry(job_id, start) for job_id, start in pairs))


def labels(report):
    return [(c.opt_job_id, c.alg_job_id, c.span, c.label) for c in report.charges]


def test_half_open_intervals_do_not_conflict():
    job = Job(1, 0, 0, 1, 5)
    assert overlap((job, F(0)), (job, F(1))) == 0
    assert not conflicts((job, F(0)), (job, F(1)))
    assert conflicts((job, F(0)), (job, F(1, 2)))


def test_label_a_goes_to_own_run():
    instance = Instance.build([Job(1, 0, 1, 1, 10), Job(2, 0, 1, 1, 10)], t=1)
    report = build_charging(schedule((1, 3), (2, 4)), schedule((1, 1), (2, 2)), instance)
    assert labels(report) == [(1, 1, 1, LABEL_A), (2, 2, 1, LABEL_A)]
    assert check_claims(report) == []


def test_label_b_inside_single_conflict():
    instance = Instance.build([Job(1, 0, 4, 4, 8), Job(2, 0, 5, 1, 7)], t=1)
    report = build_charging(schedule((2, 5)), schedule((1, 4)), instance)
    assert labels(report) == [(2, 1, 1, LABEL_B)]


def test_label_c_announced_during_conflict():
    instance = Instance.build([Job(1, 0, 4, 4, 8), Job(2, 5, 7, 2, 9)], t=1)
    report = build_charging(schedule((2, 7)), schedule((1, 4)), instance)
    assert labels(report) == [(2, 1, 2, LABEL_C)]


def test_label_d_single_conflict():
    instance = Instance.build([Job(1, 0, 4, 4, 8), Job(2, 0, 7, 2, 9)], t=1)
    report = build_charging(schedule((2, 7)), schedule((1, 4)), instance)
    assert labels(report) == [(2, 1, 2, LABEL_D)]


def test_label_e_splits_by_overlap():
    instance = Instance.build([Job(1, 0, 2, 2, 4), Job(2, 0, 4, 2, 6), Job(3, 0, 3, 2, 5)], t=1)
    report = build_charging(schedule((3, 3)), schedule((1, 2), (2, 4)), instance)
    assert labels(report) == [(3, 1, 1, LABEL_E), (3, 2, 1, LABEL_E)]
    assert report.totals() == {1: 1, 2: 1}


def test_fragments_over_contained_jobs_become_b():
    instance = Instance.build([Job(1, 0, 6, 6, 12), Job(2, 0, 7, 1, 8), Job(3, 0, 9, 2, 11)], t=1)
    report = build_charging(schedule((1, 6)), schedule((2, 7), (3, 9)), instance)
    assert labels(report) == [(1, 2, 2, LABEL_B), (1, 3, 4, LABEL_B)]
    findings = check_claims(report)
    assert {(v.claim, v.job_id) for v in findings} == {(CLAIM_B, 2), (CLAIM_B, 3)}
    assert all(v.severity != ERROR for v in findings)


def test_job_run_by_both_is_b():
    instance = Instance.build([Job(1, 0, 1, 1, 5)], t=1)
    report = build_charging(schedule((1, 1)), schedule((1, 1)), instance)
    assert labels(report) == [(1, 1, 1, LABEL_B)]


def test_orphan_breaks_aggregate():
    instance = Instance.build([Job(1, 0, 1, 1, 5)], t=1)
    report = build_charging(schedule((1, 1)), Schedule(), instance)
    assert len(report.orphans) == 1
    findings = check_claims(report)
    assert [v.claim for v in findings] == [CLAIM_UNMATCHED, CLAIM_AGGREGATE]
    assert findings[-1].severity == ERROR


def test_lower_bound_run_charges_within_bound():
    outcome = run_against_adversary(AOffAlgorithm(), proportional_lb_adversary(1, F(3, 100)))
    report = build_charging(outcome.opt_schedule, outcome.alg_schedule, outcome.instance)
    assert report.total() == F(291, 100)
    by_job = {c.opt_job_id: c.label for c in report.charges}
    assert by_job[1] == LABEL_A
    assert by_job[2] == LABEL_C
    assert {by_job[i] for i in range(3, 9)} == {LABEL_B}
    assert report.labelled(1, LABEL_B) == F(94, 100)
    assert not [v for v in check_claims(report) if v.severity == ERROR]


def test_charging_preconditions():
    jobs = [Job(1, 0, 1, 1, 5)]
    with pytest.raises(ParameterError):
        build_charging(Schedule(), Schedule(), Instance.build(jobs, 1, WeightModel.unweighted()))
    with pytest.raises(ParameterError):
        build_charging(Schedule(), Schedule(), Instance.build(jobs, 0))


@pytest.mark.parametrize("t", [F(1, 2), F(1)])
def test_aggregate_bound_carries_the_ratio(t):
    for seed in range(15):
        instance = random_instance(6, t, seed=seed)
        _, alg = run_a_off(instance)
        opt, _ = optimal_offline(instance)
        report = build_charging(opt, alg, instance)
        assert report.total() == opt.value
        assert report.total() <= (2 + 1 / t) * report.alg_value
        assert CLAIM_AGGREGATE not in {v.claim for v in check_claims(report)}
        if opt.value:
            assert alg.value / opt.value >= t / (2 * t + 1)
