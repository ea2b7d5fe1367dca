"""
Adaptive adversaries for the scheduling lab.
Each one announces a first job, watches for the algorithm to commit to it,
then announces jobs the committed machine can no longer run.
"""

import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import List, Optional

from core.errors import ParameterError
from core.models import Job, to_time
from core.weights import Weight, WeightModel
from simulator.trace import SimulationTrace

logger = logging.getLogger(__name__)

FIRST_JOB_ID = 1


class Adversary(ABC):
    """Announces jobs in reaction to the starts it has observed.

    next() returns the jobs to announce (each with a >= now), an empty list
    when it has nothing to add yet, or None once it is finished.
    """
    name = "adversary"

    def __init__(self, t, weights: WeightModel):
        self.t = to_time(t)
        self.weights = weights
        self.announced_first = False
        self.reacted = False

    @abstractmethod
    def first_job(self) -> Job:
        """The job announced at time 0."""

    @abstractmethod
    def reaction(self, s1: Fraction) -> List[Job]:
        """The jobs announced once the first job has started at s1."""

    @abstractmethod
    def target_ratio(self) -> Weight:
        """Ratio ALG/OPT the construction forces on an algorithm that takes the first job."""

    def next(self, trace: SimulationTrace, now: Fraction) -> Optional[List[Job]]:
        if not self.announced_first:
            self.announced_first = True
            return [self.first_job()]
        if self.reacted:
            return None
        s1 = trace.starts().get(FIRST_JOB_ID)
        if s1 is None:
            return []
        self.reacted = True
        jobs = self.reaction(s1)
        logger.debug(f"{self.name}: first job started at {s1}, announcing {len(jobs)} jobs")
        return jobs


class ProportionalLowerBound(Adversary):
    """Forces A_Off down to roughly t/(2t+1) under proportional weights.

    After the first job starts at s1 the adversary announces, at s1, a long
    job J_2 released just before the first job ends plus a chain of short
    jobs that fill [s1 + gamma/t, r_2] back to back. Every job carries
    exactly t-notice and none of them fits beside the running first job.
    """
    name = "proportional-lb"

    def __init__(self, t, eps):
        super().__init__(t, WeightModel.proportional())
        self.eps = to_time(eps)
        if not 0 < self.t <= 1:
            raise ParameterError(f"Lower-bound adversary needs 0 < t <= 1, got {self.t}")
        if self.eps <= 0:
            raise ParameterError(f"eps must be positive, got {self.eps}")
        t = self.t
        self.gamma = self.eps * t * (2 * t + 1) / (2 + t)
        if self.gamma >= Fraction(1, 4) or self.gamma * (1 + 1 / t) >= 1:
            raise ParameterError(f"eps = {self.eps} is too large: gamma = {self.gamma} leaves no room for the chain")
        # Large enough that OPT can still run the first job after everything else
        total = (1 - self.gamma) / t + 1 - self.gamma - self.gamma / t
        self.d1 = t + 1 + total + 10

    def first_job(self) -> Job:
        return Job(FIRST_JOB_ID, 0, self.t, 1, self.d1)

    def reaction(self, s1: Fraction) -> List[Job]:
        t, gamma = self.t, self.gamma
        r2 = s1 + 1 - gamma
        p2 = (1 - gamma) / t
        jobs = [Job(2, s1, r2, p2, r2 + p2)]
        release = s1 + gamma / t
        while release < r2:
            p = min((release - s1) / t, r2 - release)
            jobs.append(Job(len(jobs) + 2, s1, release, p, release + p))
            release += p
        return jobs

    def opt_value(self) -> Fraction:
        """OPT of the emitted instance when the first job starts at its release."""
        t, gamma = self.t, self.gamma
        return (2 * t + 1) / t - (2 + t) * gamma / t

    def target_ratio(self) -> Fraction:
        return 1 / self.opt_value()


class UnweightedAdversary(Adversary):
    """Unit weights: the first job blocks N small jobs announced inside its window."""
    name = "unweighted"

    def __init__(self, t, n: int):
        super().__init__(t, WeightModel.unweighted())
        if self.t <= 0:
            raise ParameterError(f"Unweighted adversary needs t > 0, got {self.t}")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ParameterError(f"N must be a positive integer, got {n!r}")
        self.n = n

    def first_job(self) -> Job:
        return Job(FIRST_JOB_ID, 0, self.t, 1, self.t + 1)

    def reaction(self, s1: Fraction) -> List[Job]:
        n, t = self.n, self.t
        margin = Fraction(1, 4 * n)
        p = Fraction(1, 4 * n * (t + 1))
        jobs = []
        for i in range(1, n + 1):
            slot_start, slot_end = s1 + Fraction(i - 1, n), s1 + Fraction(i, n)
            a = slot_start + margin
            jobs.append(Job(i + 1, a, a + t * p, p, slot_end - margin))
        return jobs

    def target_ratio(self) -> Fraction:
        return Fraction(1, self.n)


class BenevolentAdversary(Adversary):
    """Power weights p**k tuned so the blocked second job is worth exactly N."""
    name = "c-benevolent"

    def __init__(self, t, n: int, eps):
        t = to_time(t)
        eps = to_time(eps)
        if not 0 < t < 1:
            raise ParameterError(f"C-benevolent adversary needs 0 < t < 1, got {t}")
        if not 0 < eps < 1:
            raise ParameterError(f"eps must lie in (0, 1), got {eps}")
        base = (1 - eps) / t
        if base <= 1:
            raise ParameterError(f"(1 - eps)/t must exceed 1, got {base}")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ParameterError(f"N must be a positive integer, got {n!r}")
        if n < base:
            raise ParameterError(f"N = {n} is below (1 - eps)/t = {base}; the exponent would drop under 1")
        self.n = n
        self.eps = eps
        self.exponent = math.log(n) / math.log(float(base))
        super().__init__(t, WeightModel.power(self.exponent))

    def first_job(self) -> Job:
        return Job(FIRST_JOB_ID, 0, self.t, 1, self.t + 1)

    def reaction(self, s1: Fraction) -> List[Job]:
        r2 = s1 + 1 - self.eps
        p2 = (1 - self.eps) / self.t
        return [Job(2, s1, r2, p2, r2 + p2)]

    def target_ratio(self) -> float:
        return 1.0 / self.n


def proportional_lb_adversary(t, eps) -> ProportionalLowerBound:
    """Adversary showing no deterministic algorithm beats t/(2t+1) by more than eps."""
    return ProportionalLowerBound(t, eps)


def unweighted_adversary(t, n: int) -> UnweightedAdversary:
    """Adversary forcing ratio 1/N under unit weights."""
    return UnweightedAdversary(t, n)


def c_benevolent_adversary(t, n: int, eps) -> BenevolentAdversary:
    """Adversary forcing ratio 1/N under a C-benevolent power weight model."""
    return BenevolentAdversary(t, n, eps)
