"""
Charging diagnostic for the scheduling lab.
Assigns every job OPT runs to the ALG jobs it conflicts with and checks the
per-job and aggregate bounds that make A_Off t/(2t+1)-competitive.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from core.errors import ParameterError
from core.models import Instance, Job, Schedule
from core.weights import PROPORTIONAL

logger = logging.getLogger(__name__)

LABEL_A, LABEL_B, LABEL_C, LABEL_D, LABEL_E = "A", "B", "C", "D", "E"
LABELS = (LABEL_A, LABEL_B, LABEL_C, LABEL_D, LABEL_E)

WARNING, ERROR = "warning", "error"

CLAIM_SINGLE = "claim-1"
CLAIM_NOTICE = "claim-2"
CLAIM_NON_B = "claim-3"
CLAIM_B = "claim-4"
CLAIM_JOB_TOTAL = "job-total"
CLAIM_AGGREGATE = "aggregate"
CLAIM_UNMATCHED = "unmatched-A"

Placed = Tuple[Job, Fraction]


@dataclass(frozen=True)
class Charge:
    """A span of one OPT job charged to one ALG job (alg_job_id None for an orphan)."""
    opt_job_id: int
    alg_job_id: Optional[int]
    span: Fraction
    label: str


@dataclass(frozen=True)
class ClaimViolation:
    claim: str
    job_id: Optional[int]
    lhs: Fraction
    rhs: Fraction
    severity: str = WARNING

    def __str__(self) -> str:
        where = f"job {self.job_id}" if self.job_id is not None else "all jobs"
        return f"[{self.severity}] {self.claim} at {where}: {self.lhs} > {self.rhs}"


@dataclass
class ChargeReport:
    """Charges of every OPT job, grouped by the ALG job that absorbs them."""
    t: Fraction
    alg_spans: Dict[int, Fraction]
    charges: List[Charge] = field(default_factory=list)

    def charges_for(self, alg_job_id: int) -> List[Charge]:
        return [c for c in self.charges if c.alg_job_id == alg_job_id]

    @property
    def orphans(self) -> List[Charge]:
        """Label-A charges whose OPT job ALG never ran."""
        return [c for c in self.charges if c.alg_job_id is None]

    def labelled(self, alg_job_id: int, *labels: str) -> Fraction:
        return sum((c.span for c in self.charges_for(alg_job_id) if c.label in labels), Fraction(0))

    def total_for(self, alg_job_id: int) -> Fraction:
        return sum((c.span for c in self.charges_for(alg_job_id)), Fraction(0))

    def totals(self) -> Dict[int, Fraction]:
        return {job_id: self.total_for(job_id) for job_id in sorted(self.alg_spans)}

    def total(self) -> Fraction:
        return sum((c.span for c in self.charges), Fraction(0))

    @property
    def alg_value(self) -> Fraction:
        return sum(self.alg_spans.values(), Fraction(0))


def _interval(placed: Placed) -> Tuple[Fraction, Fraction]:
    job, start = placed
    return start, start + job.p


def overlap(first: Placed, second: Placed) -> Fraction:
    """Length of the intersection of two half-open execution intervals."""
    (s1, e1), (s2, e2) = _interval(first), _interval(second)
    return max(Fraction(0), min(e1, e2) - max(s1, s2))


def _contains(outer: Placed, inner: Placed) -> bool:
    (s_out, e_out), (s_in, e_in) = _interval(outer), _interval(inner)
    return s_out <= s_in and e_in <= e_out


def conflicts(opt_entry: Placed, alg_entry: Placed) -> bool:
    """True iff the half-open execution intervals [s, s+p) intersect."""
    return overlap(opt_entry, alg_entry) > 0


def _placed(schedule: Schedule, instance: Instance) -> List[Placed]:
    return [(instance.job(entry.job_id), entry.start) for entry in schedule.entries]


def build_charging(opt: Schedule, alg: Schedule, instance: Instance) -> ChargeReport:
    """Classify every OPT job against the ALG run and charge its span.

    Precedence: A no conflict (charged to ALG's own run of the job),
    B inside the single conflicting ALG job, C announced while a conflicting
    ALG job ran, D exactly one conflict, E several conflicts (split by
    overlap length; a fragment whose ALG job lies inside the OPT job is B).

    Raises:
        ParameterError: weights are not proportional or t is not positive
    """
    if instance.weights.kind != PROPORTIONAL:
        raise ParameterError(f"Charging is defined for proportional weights only, got {instance.weights}")
    if instance.t <= 0:
        raise ParameterError(f"Charging needs a positive notice level, got t = {instance.t}")

    alg_placed = _placed(alg, instance)
    report = ChargeReport(instance.t, {job.id: job.p for job, _ in alg_placed})

    for opt_entry in _placed(opt, instance):
        job, start = opt_entry
        hits = [alg_entry for alg_entry in alg_placed if conflicts(opt_entry, alg_entry)]
        if not hits:
            owner = job.id if job.id in report.alg_spans else None
            report.charges.append(Charge(job.id, owner, job.p, LABEL_A))
            continue

        announced_during = [(alg_job, alg_start) for alg_job, alg_start in hits
                            if alg_start <= job.a < alg_start + alg_job.p]
        if len(hits) == 1 and _contains(hits[0], opt_entry):
            report.charges.append(Charge(job.id, hits[0][0].id, job.p, LABEL_B))
        elif announced_during:
            report.charges.append(Charge(job.id, announced_during[0][0].id, job.p, LABEL_C))
        elif len(hits) == 1:
            report.charges.append(Charge(job.id, hits[0][0].id, job.p, LABEL_D))
        else:
            _split(report, opt_entry, hits)

    logger.debug(f"Charged {len(opt)} OPT jobs to {len(alg)} ALG jobs, {len(report.orphans)} orphans")
    return report


def _split(report: ChargeReport, opt_entry: Placed, hits: List[Placed]) -> None:
    job, start = opt_entry
    overlaps = [overlap(opt_entry, alg_entry) for alg_entry in hits]
    whole = sum(overlaps, Fraction(0))
    for (alg_job, alg_start), amount in zip(hits, overlaps):
        label = LABEL_B if _contains(opt_entry, (alg_job, alg_start)) else LABEL_E
        report.charges.append(Charge(job.id, alg_job.id, job.p * amount / whole, label))


def check_claims(report: ChargeReport, t=None) -> List[ClaimViolation]:
    """Evaluate every charging claim in exact arithmetic.

    Per-job claims are warnings; only the aggregate bound is an error.
    """
    t = Fraction(report.t if t is None else t)
    found = []
    for charge in report.orphans:
        found.append(ClaimViolation(CLAIM_UNMATCHED, charge.opt_job_id, charge.span, Fraction(0)))

    for alg_id, p_alg in sorted(report.alg_spans.items()):
        charges = report.charges_for(alg_id)
        for charge in charges:
            if charge.label in (LABEL_A, LABEL_D, LABEL_E) and charge.span > p_alg:
                found.append(ClaimViolation(CLAIM_SINGLE, alg_id, charge.span, p_alg))
            if charge.label == LABEL_C and charge.span > p_alg / t:
                found.append(ClaimViolation(CLAIM_NOTICE, alg_id, charge.span, p_alg / t))
        non_b = report.labelled(alg_id, LABEL_A, LABEL_C, LABEL_D, LABEL_E)
        if non_b > (1 / t + 1) * p_alg:
            found.append(ClaimViolation(CLAIM_NON_B, alg_id, non_b, (1 / t + 1) * p_alg))
        in_b = report.labelled(alg_id, LABEL_B)
        if in_b > p_alg:
            found.append(ClaimViolation(CLAIM_B, alg_id, in_b, p_alg))
        total = report.total_for(alg_id)
        if total > (2 + 1 / t) * p_alg:
            found.append(ClaimViolation(CLAIM_JOB_TOTAL, alg_id, total, (2 + 1 / t) * p_alg))

    bound = (2 + 1 / t) * report.alg_value
    if report.total() > bound:
        found.append(ClaimViolation(CLAIM_AGGREGATE, None, report.total(), bound, ERROR))

    for violation in found:
        log = logger.error if violation.severity == ERROR else logger.warning
        log(f"Charging finding: {violation}")
    return found
