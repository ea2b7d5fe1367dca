"""
Shared fixtures for the scheduling lab tests.
"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from core.models import Instance, Job  # noqa: E402
from storage import codec  # noqa: E402


@pytest.fixture
def two_jobs():
    """(r=0,p=2,d=2) and (r=0,p=1,d=4): the optimum runs both, value 3."""
    return Instance.build([Job(1, 0, 0, 2, 2), Job(2, 0, 0, 1, 4)], t=0)


@pytest.fixture
def single_job():
    return Instance.build([Job(1, 0, 1, 1, 2)], t=1)


@pytest.fixture
def write_instance(tmp_path):
    """Save an instance to a temporary JSON file and return its path."""
    def _write(instance, name="instance.json"):
        path = tmp_path / name
        codec.save_instance(path, instance)
        return str(path)
    return _write

