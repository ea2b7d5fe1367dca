"""
Tests for sweep experiments and their CSV output.
"""

from fractions import Fraction as F

import pandas as pd
import pytest

from core.errors import ParameterError
from harness.experiments import (CSV_COLUMNS, ExperimentConfig, run_adversary_sweep, run_random_sweep,
                                 trial_size, write_sweep_csv)


def test_trial_size_is_seeded():
    assert trial_size(4, 6) == trial_size(4, 6)
    assert all(1 <= trial_size(seed, 6) <= 6 for seed in range(50))
    assert trial_size(0, 0) == 0


def test_random_sweep_rows_in_seed_order():
    rows = run_random_sweep([F(1), F(1, 2)], trials=3, base_seed=5, max_n=4)
    assert [(row.t, row.seed) for row in rows] == [(F(1, 2), 5), (F(1, 2), 6), (F(1, 2), 7),
                                                   (F(1), 5), (F(1), 6), (F(1), 7)]
    assert all(row.ok for row in rows)
    assert all(row.greedy <= row.opt and row.alg <= row.opt for row in rows)


def test_fixed_job_count():
    rows = run_random_sweep([F(1, 4)], trials=2, base_seed=0, max_n=8, fixed_n=3)
    assert [row.n for row in rows] == [3, 3]


def test_parallel_sweep_matches_serial():
    serial = run_random_sweep([F(1, 2)], trials=4, base_seed=1, max_n=5)
    parallel = run_random_sweep([F(1, 2)], trials=4, base_seed=1, max_n=5, workers=2)
    strip = lambda rows: [(r.t, r.n, r.seed, r.alg, r.opt, r.greedy, r.nodes) for r in rows]  # noqa: E731
    assert strip(serial) == strip(parallel)


def test_adversary_sweep():
    rows = run_adversary_sweep([F(1)], F(3, 100))
    assert len(rows) == 1
    assert rows[0].alg == 1
    assert rows[0].opt == F(291, 100)
    assert rows[0].ok
    assert rows[0].seed == 0
    assert rows[0].nodes >= 1


def test_csv_layout(tmp_path):
    rows = run_random_sweep([F(1, 2)], trials=2, base_seed=0, max_n=3)
    path = write_sweep_csv(rows, tmp_path / "out" / "sweep.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == CSV_COLUMNS == ["t", "n", "seed", "alg_num", "alg_den", "opt_num", "opt_den",
                                                 "ratio", "bound", "ok", "nodes", "ms"]
    assert len(frame) == 2
    assert list(frame["t"]) == ["1/2", "1/2"]
    assert list(frame["seed"]) == [0, 1]


@pytest.mark.parametrize("config", [
    ExperimentConfig(mode="teleport"),
    ExperimentConfig(mode="solve"),
    ExperimentConfig(mode="adversary", kind="proportional"),
    ExperimentConfig(mode="adversary", kind="proportional", t=F(1)),
    ExperimentConfig(mode="adversary", kind="unweighted", t=F(1)),
    ExperimentConfig(mode="sweep", source="lb-adversary"),
    ExperimentConfig(mode="sweep", trials=-1),
    ExperimentConfig(mode="gantt", instance="x.json"),
    ExperimentConfig(mode="sweep", workers=0),
])
def test_config_validation(config):
    with pytest.raises(ParameterError):
        config.validate()
