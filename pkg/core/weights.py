"""
Weight models for the scheduling lab.
Jobs are f-related: every job's weight is f(p) for one model-wide function f.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import MalformedInputError, ParameterError

logger = logging.getLogger(__name__)

Weight = Union[Fraction, float]
Triple = Tuple[Fraction, Fraction, Fraction]

PROPORTIONAL = "proportional"
UNWEIGHTED = "unweighted"
POWER = "power"

# Relative slack for float comparisons in benevolence checks
FLOAT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class WeightModel:
    """The function f relating a job's processing time to its weight.

    Proportional and unweighted models are exact (Fraction); the power
    model p**k is evaluated in floating point.
    """
    kind: str = PROPORTIONAL
    exponent: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (PROPORTIONAL, UNWEIGHTED, POWER):
            raise ParameterError(f"Unknown weight model: {self.kind}")
        if self.kind == POWER:
            if self.exponent is None or not math.isfinite(self.exponent) or self.exponent < 1:
                raise ParameterError(f"Power weights need a finite exponent k >= 1, got {self.exponent}")
        elif self.exponent is not None:
            raise ParameterError(f"{self.kind} weights take no exponent")

    @classmethod
    def proportional(cls) -> "WeightModel":
        return cls(PROPORTIONAL)

    @classmethod
    def unweighted(cls) -> "WeightModel":
        return cls(UNWEIGHTED)

    @classmethod
    def power(cls, k: float) -> "WeightModel":
        return cls(POWER, float(k))

    @property
    def is_exact(self) -> bool:
        return self.kind != POWER

    def zero(self) -> Weight:
        """Additive identity in this model's number type."""
        return Fraction(0) if self.is_exact else 0.0

    def evaluate(self, p) -> Weight:
        """Evaluate f at p >= 0 (f(0) included, unlike weight_of)."""
        if self.kind == PROPORTIONAL:
            return Fraction(p)
        if self.kind == UNWEIGHTED:
            return Fraction(1)
        return float(p) ** self.exponent

    def __str__(self) -> str:
        if self.kind == POWER:
            return f"power(k={self.exponent:.6g})"
        return self.kind


def weight_of(model: WeightModel, p) -> Weight:
    """Weight of a job with processing time p under the given model.

    Args:
        model: Weight model
        p: Processing time, must be positive

    Returns:
        f(p), a Fraction for exact models and a float for power weights
    """
    if p <= 0:
        raise ParameterError(f"Processing time must be positive, got {p}")
    return model.evaluate(p)


def total_weight(model: WeightModel, spans: Sequence) -> Weight:
    """Sum of weights over a sequence of processing times."""
    total = model.zero()
    for p in spans:
        total += weight_of(model, p)
    return total


@dataclass(frozen=True)
class BenevolenceViolation:
    """One failed C-benevolence condition."""
    condition: str
    detail: str

    def __str__(self) -> str:
        return f"{self.condition}: {self.detail}"


def _le(lhs, rhs) -> bool:
    if isinstance(lhs, float) or isinstance(rhs, float):
        return lhs <= rhs or math.isclose(lhs, rhs, rel_tol=FLOAT_TOLERANCE, abs_tol=FLOAT_TOLERANCE)
    return lhs <= rhs


def _check_triple(triple) -> Triple:
    try:
        p1, p2, eps = (Fraction(x) for x in triple)
    except (TypeError, ValueError) as e:
        raise MalformedInputError(f"Grid triple {triple!r} is not three rationals: {e}")
    if not (0 < eps <= p1 <= p2):
        raise MalformedInputError(f"Grid triple {triple!r} must satisfy 0 < eps <= p1 <= p2")
    return p1, p2, eps


def check_c_benevolent(f: Union[WeightModel, Callable], grid: Sequence) -> List[BenevolenceViolation]:
    """Empirically check the three C-benevolence conditions on a sample grid.

    C1: f(0) = 0 and f(p) > 0 on every positive sample point.
    C2: f(p1) + f(p2) <= f(p1 - eps) + f(p2 + eps) for every triple.
    C3: f strictly increasing over the sorted positive sample points.

    A clean result is evidence, not proof.

    Args:
        f: A WeightModel or any callable accepting a Fraction
        grid: Nonempty list of (p1, p2, eps) triples with 0 < eps <= p1 <= p2

    Returns:
        List of violations, empty when every sampled condition holds
    """
    if not grid:
        raise MalformedInputError("Benevolence grid must not be empty")
    triples = [_check_triple(triple) for triple in grid]
    fn = f.evaluate if isinstance(f, WeightModel) else f

    violations = []
    zero_value = fn(Fraction(0))
    if zero_value != 0:
        violations.append(BenevolenceViolation("C1", f"f(0) = {zero_value}, expected 0"))

    points = sorted({x for p1, p2, eps in triples for x in (p1, p2, p1 - eps, p2 + eps) if x > 0})
    values = [fn(x) for x in points]
    for x, value in zip(points, values):
        if not value > 0:
            violations.append(BenevolenceViolation("C1", f"f({x}) = {value} is not positive"))

    for p1, p2, eps in triples:
        lhs = fn(p1) + fn(p2)
        rhs = fn(p1 - eps) + fn(p2 + eps)
        if not _le(lhs, rhs):
            violations.append(BenevolenceViolation(
                "C2", f"f({p1}) + f({p2}) = {lhs} > f({p1 - eps}) + f({p2 + eps}) = {rhs}"))

    for (x, fx), (y, fy) in zip(zip(points, values), zip(points[1:], values[1:])):
        if not fx < fy:
            violations.append(BenevolenceViolation("C3", f"f({x}) = {fx} is not below f({y}) = {fy}"))

    if violations:
        logger.debug(f"C-benevolence check found {len(violations)} violations on {len(triples)} triples")
    return violations


def make_grid(count: int, upper, seed: int = 0, denominator: int = 100) -> List[Triple]:
    """Build a deterministic grid of valid (p1, p2, eps) triples.

    Args:
        count: Number of triples
        upper: Largest p2 drawn
        seed: RNG seed
        denominator: Grid resolution

    Returns:
        List of triples with 0 < eps <= p1 <= p2 <= upper
    """
    upper = Fraction(upper)
    if count < 1 or upper <= 0:
        raise ParameterError(f"Need count >= 1 and upper > 0, got {count}, {upper}")
    rng = np.random.default_rng(seed)
    steps = max(1, int(upper * denominator))
    triples = []
    for _ in range(count):
        a, b = sorted(int(x) for x in rng.integers(1, steps + 1, size=2))
        p1, p2 = Fraction(a, denominator), Fraction(b, denominator)
        eps = Fraction(int(rng.integers(1, a + 1)), denominator)
        triples.append((p1, p2, eps))
    return triples
