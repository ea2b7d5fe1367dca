"""
Seeded acceptance sweeps: solver oracle, competitive bound, charging and scale invariance.
"""

import logging
from fractions import Fraction as F

import pytest

from adversaries.constructions import c_benevolent_adversary
from adversaries.generator import random_instance
from charging.charging_report import ERROR, build_charging, check_claims
from core.models import competitive_bound
from core.validation import is_feasible_schedule
from core.weights import check_c_benevolent, make_grid
from harness.experiments import trial_size
from simulator.algorithms import run_a_off
from solver.offline_solver import brute_force_opt, optimal_offline

logger = logging.getLogger(__name__)

NOTICE_LEVELS = (F(1, 4), F(1, 2), F(1))


def test_branch_and_bound_matches_oracle():
    for seed in range(500):
        instance = random_instance(trial_size(seed, 8), F(1, 2), seed=seed)
        schedule, _ = optimal_offline(instance)
        assert schedule.value == brute_force_opt(instance).value, f"seed {seed}"


@pytest.mark.parametrize("t", NOTICE_LEVELS)
def test_a_off_is_competitive(t):
    bound = competitive_bound(t)
    for seed in range(1000):
        instance = random_instance(trial_size(seed, 10), t, seed=seed)
        _, schedule = run_a_off(instance)
        optimum, _ = optimal_offline(instance)
        assert is_feasible_schedule(instance, schedule), f"t={t} seed={seed}"
        assert schedule.value >= bound * optimum.value, f"t={t} seed={seed}"


def test_charging_is_sound():
    for seed in range(200):
        t = NOTICE_LEVELS[seed % len(NOTICE_LEVELS)]
        instance = random_instance(trial_size(seed, 10), t, seed=seed)
        _, alg = run_a_off(instance)
        opt, _ = optimal_offline(instance)
        report = build_charging(opt, alg, instance)
        assert report.total() == opt.value, f"t={t} seed={seed}"
        findings = check_claims(report)
        for finding in findings:
            logger.warning(f"t={t} seed={seed}: {finding}")
        assert not [v for v in findings if v.severity == ERROR], f"t={t} seed={seed}"


def test_scaling_preserves_a_off_run():
    c = F(3, 7)
    for seed in range(50):
        instance = random_instance(trial_size(seed, 8), F(1, 2), seed=seed)
        trace, schedule = run_a_off(instance)
        scaled_trace, scaled = run_a_off(instance.scaled(c))
        assert scaled_trace.started_ids() == trace.started_ids(), f"seed {seed}"
        assert scaled.value == c * schedule.value, f"seed {seed}"
        assert optimal_offline(instance.scaled(c))[0].job_ids() == optimal_offline(instance)[0].job_ids()


def test_benevolent_weights_pass_the_grid():
    adversary = c_benevolent_adversary(F(1, 2), 100, F(1, 10))
    assert adversary.exponent == pytest.approx(7.8348, abs=1e-4)
    assert check_c_benevolent(adversary.weights, make_grid(100, 5, seed=7)) == []
