"""Spreading the residue spectrum at a point by planned elementary transformations."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .errors import InfinitePoint, InternalAssertionFailure, PreconditionViolated
from .exactalg import INF
from .exactalg.linalg import eigenspace
from .logconn import degree, fuchs_degree, residue, residue_matrix
from .moves import GaugeRecord, elementary_transformation, spectrum_after, verify_gauge_equivalence


def required_gap(N, g, sigma):
    return max(1, N + N * N * (2 * g - 2 + sigma))


def step_bound(N, M):
    """N^3 M / 2."""
    return Fraction(N ** 3 * M, 2)


@dataclass(frozen=True)
class EigenClassPartition:
    classes: tuple

    @property
    def sizes(self):
        return tuple(len(c) for c in self.classes)


def partition_classes(spectrum):
    """Group eigenvalues whose differences are integers; classes ordered by their smallest element."""
    groups = {}
    for v in sorted(Fraction(x) for x in spectrum):
        groups.setdefault(v - floor(v), []).append(v)
    classes = sorted((tuple(c) for c in groups.values()), key=lambda c: c[0])
    return EigenClassPartition(tuple(classes))


@dataclass(frozen=True)
class PlanEntry:
    cls: int
    index: int
    value: Fraction
    reduction: int


@dataclass(frozen=True)
class TransformationPlan:
    entries: tuple
    reductions: tuple
    total_steps: int
    targets: tuple


def plan_schedule(partition, M):
    if M < 1:
        raise PreconditionViolated("gap M must be at least 1", clause="M >= 1")
    entries, reductions, targets = [], [], []
    for j, cls in enumerate(partition.classes):
        m = len(cls)
        red = tuple((m - 1 - i) * M for i in range(m))
        reductions.append(red)
        for i, (value, r) in enumerate(zip(cls, red)):
            targets.append(value - r)
            if r > 0:
                entries.append(PlanEntry(j, i, value, r))
    total = sum(e.reduction for e in entries)
    return TransformationPlan(tuple(entries), tuple(reductions), total, tuple(sorted(targets)))


def gabber_conditions(spectrum, M):
    """(simple, separated): no repeated eigenvalue; integer differences at least M."""
    values = sorted(spectrum)
    simple = len(set(values)) == len(values)
    separated = True
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            diff = b - a
            if diff.denominator == 1 and diff != 0 and abs(diff) < M:
                separated = False
    return simple, separated


@dataclass(frozen=True)
class StepEntry:
    step: int
    eigenvalue: Fraction
    eigenvector: tuple
    spectrum_after: tuple
    degree_after: int
    fuchs_degree_after: Fraction


@dataclass(frozen=True)
class StepLog:
    point: object
    entries: tuple
    gauge: GaugeRecord
    summary: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)


def run_gabber(conn, p, M):
    """Make the residue spectrum at p simple with integer gaps at least M.

    Returns (new connection, StepLog); every unit step is checked against the
    predicted spectrum and the final object against the theorem's conditions.
    """
    if p is INF:
        raise InfinitePoint("the working point must be finite")
    if M < 1:
        raise PreconditionViolated("gap M must be at least 1", clause="M >= 1")
    n = conn.rank
    spectrum = residue(conn, p).spectrum
    partition = partition_classes(spectrum)
    plan = plan_schedule(partition, M)
    deg0 = degree(conn)
    cur = conn
    record = GaugeRecord.identity(p, n)
    entries = []
    for item in plan.entries:
        value = item.value
        for _ in range(item.reduction):
            basis = eigenspace(residue_matrix(cur, p).constant_rows(), value)
            if not basis:
                raise InternalAssertionFailure(f"{value} has no eigenvector at step {len(entries) + 1}")
            w = basis[0]
            cur, rec = elementary_transformation(cur, p, w)
            record = record.then(rec)
            predicted = spectrum_after(spectrum, value)
            actual = residue(cur, p).spectrum
            if actual != predicted:
                raise InternalAssertionFailure(f"spectrum {actual} differs from prediction {predicted}")
            spectrum = actual
            value -= 1
            entries.append(StepEntry(len(entries) + 1, value + 1, w, spectrum, degree(cur),
                                     fuchs_degree(cur)))
    total = len(entries)
    simple, separated = gabber_conditions(spectrum, M)
    checks = {
        "simple_spectrum": simple,
        "integer_gaps_at_least_M": separated,
        "steps_within_schedule_bound": total == plan.total_steps
        and 2 * total <= sum(m * (m - 1) for m in partition.sizes) * M,
        "steps_within_cubic_bound": total <= step_bound(n, M),
        "degree_increase": degree(cur) == deg0 + total,
        "fuchs_relation": all(e.degree_after == e.fuchs_degree_after for e in entries),
    }
    if total:
        checks["gauge_equivalent_off_p"] = bool(verify_gauge_equivalence(
            conn, cur, record.cumulative_gauge, p, record.cumulative_inverse))
    else:
        checks["gauge_equivalent_off_p"] = True
    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise InternalAssertionFailure(f"postconditions failed: {', '.join(failed)}")
    summary = {"M": M, "plan_total": plan.total_steps, "steps": total,
               "initial_spectrum": tuple(sorted(Fraction(x) for x in residue(conn, p).spectrum)),
               "final_spectrum": spectrum, "checks": checks}
    return cur, StepLog(p, tuple(entries), record, summary)
