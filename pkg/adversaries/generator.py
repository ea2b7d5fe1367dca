"""
Seeded random instance generator for the scheduling lab.
Every generated job gets exactly t-notice: r - a = t*p.
"""

import logging
import math
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from core.errors import ParameterError
from core.models import Instance, Job, to_time
from core.weights import WeightModel

logger = logging.getLogger(__name__)

DEFAULT_HORIZON = Fraction(10)
DEFAULT_P_RANGE = (Fraction(1, 2), Fraction(3))
DEFAULT_SLACK_RANGE = (Fraction(0), Fraction(2))
MAX_DENOMINATOR = 1000


def _grid(rng: np.random.Generator, low: Fraction, high: Fraction, denominator: int) -> Fraction:
    """Uniform draw from the multiples of 1/denominator inside [low, high]."""
    first, last = math.ceil(low * denominator), math.floor(high * denominator)
    if first > last:
        raise ParameterError(f"No multiple of 1/{denominator} lies in [{low}, {high}]")
    return Fraction(int(rng.integers(first, last, endpoint=True)), denominator)


def random_instance(n: int, t, horizon=DEFAULT_HORIZON,
                    p_range: Tuple = DEFAULT_P_RANGE, slack_range: Tuple = DEFAULT_SLACK_RANGE,
                    seed: int = 0, denominator: int = 100,
                    weights: Optional[WeightModel] = None) -> Instance:
    """Draw a valid instance with exact t-notice.

    Args:
        n: Number of jobs
        t: Notice level
        horizon: Latest release time
        p_range: Inclusive (low, high) range of processing times, low > 0
        slack_range: Inclusive range of d - (r + p)
        seed: Seed for numpy's default_rng
        denominator: Resolution of the rational grid (at most 1000)
        weights: Weight model (proportional by default)

    Returns:
        Instance with dense ids 1..n in announcement order

    Raises:
        ParameterError: the ranges admit no job
    """
    t, horizon = to_time(t), to_time(horizon)
    p_lo, p_hi = (to_time(v) for v in p_range)
    s_lo, s_hi = (to_time(v) for v in slack_range)
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParameterError(f"n must be a nonnegative integer, got {n!r}")
    if not 1 <= denominator <= MAX_DENOMINATOR:
        raise ParameterError(f"Grid denominator must lie in [1, {MAX_DENOMINATOR}], got {denominator}")
    if p_lo <= 0 or p_lo > p_hi:
        raise ParameterError(f"Processing range must satisfy 0 < low <= high, got [{p_lo}, {p_hi}]")
    if s_lo > s_hi:
        raise ParameterError(f"Slack range is empty: [{s_lo}, {s_hi}]")
    if horizon < t * p_hi:
        raise ParameterError(f"Horizon {horizon} is shorter than the notice t*p = {t * p_hi} of the longest job")

    rng = np.random.default_rng(seed)
    drawn = []
    for index in range(n):
        p = _grid(rng, p_lo, p_hi, denominator)
        r = _grid(rng, t * p, horizon, denominator)
        slack = _grid(rng, s_lo, s_hi, denominator)
        drawn.append((r - t * p, index, r, p, r + p + slack))

    drawn.sort(key=lambda item: (item[0], item[1]))
    jobs = tuple(Job(i + 1, a, r, p, d) for i, (a, _, r, p, d) in enumerate(drawn))
    logger.debug(f"random_instance(n={n}, t={t}, seed={seed}): {len(jobs)} jobs")
    return Instance(jobs, t, weights or WeightModel.proportional())
