"""
Tests for JSON storage of instances, schedules and traces.
"""

import json
from fractions import Fraction as F

import pytest

from core.errors import MalformedInputError
from core.models import Instance, Job
from core.weights import WeightModel
from simulator.algorithms import run_a_off
from storage import codec


def test_rationals_in_lowest_terms():
    assert codec.rational_to_json(F(6, 4)) == {"num": 3, "den": 2}
    assert codec.rational_from_json({"num": 6, "den": 4}) == F(3, 2)
    assert codec.rational_from_json(2) == 2


@pytest.mark.parametrize("bad", [{"num": 1}, {"num": 1, "den": 0}, {"num": 1.5, "den": 2}, "1/2", True, None])
def test_bad_rationals(bad):
    with pytest.raises(MalformedInputError):
        codec.rational_from_json(bad)


def test_instance_file_round_trip(tmp_path):
    instance = Instance.build([Job(1, 0, F(1, 3), 1, 3), Job(2, F(1, 2), 1, F(2, 3), 4)], F(1, 3),
                              WeightModel.power(2.5))
    path = tmp_path / "instance.json"
    codec.save_instance(path, instance)
    assert codec.load_instance(path) == instance
    stored = json.loads(path.read_text())
    assert stored["weights"] == {"power": {"k": 2.5}}
    assert stored["jobs"][0]["r"] == {"num": 1, "den": 3}


def test_missing_weights_default_to_proportional():
    instance = codec.instance_from_json({"t": 1, "jobs": [{"id": 1, "a": 0, "r": 1, "p": 1, "d": 2}]})
    assert instance.weights == WeightModel.proportional()
    assert instance.jobs[0].d == 2


def test_malformed_job_names_its_index():
    with pytest.raises(MalformedInputError, match=r"jobs\[1\]"):
        codec.instance_from_json({"jobs": [{"id": 1, "a": 0, "r": 0, "p": 1, "d": 1}, {"id": 2, "a": 0}]})
    with pytest.raises(MalformedInputError):
        codec.weights_from_json("quadratic")


def test_syntax_error_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "t": ,\n}')
    with pytest.raises(MalformedInputError) as info:
        codec.load_instance(path)
    assert info.value.line == 2


def test_schedule_file_round_trip(tmp_path, two_jobs):
    _, schedule = run_a_off(two_jobs)
    path = tmp_path / "schedule.json"
    codec.save_schedule(path, schedule)
    assert codec.load_schedule(path) == schedule


def test_trace_lines(single_job):
    trace, _ = run_a_off(single_job)
    text = codec.dumps_trace(trace)
    lines = text.splitlines()
    assert len(lines) == len(trace.events) + 1
    assert list(json.loads(lines[0])) == ["time", "kind", "job"]
    assert json.loads(lines[-1]) == {"kind": "value", "value": {"num": 1, "den": 1}}
    restored = codec.loads_trace(text)
    assert restored.events == trace.events
    assert restored.value == 1


def test_unknown_trace_event():
    with pytest.raises(MalformedInputError) as info:
        codec.loads_trace('{"time": 0, "kind": "teleport", "id": 1}\n')
    assert info.value.line == 1
