"""Twist normalization, degree bounds, the induction to degree 0, and retrivialization."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .errors import (
    InfinitePoint,
    InternalAssertionFailure,
    NoEligibleEigenvector,
    NotNormalized,
    NotTrivialBundle,
    PreconditionViolated,
    SpacingViolation,
)
from .exactalg import INF, RatMatrix, RationalFunction, char_poly, format_point, in_span
from .gabber import StepEntry, StepLog, gabber_conditions, required_gap, run_gabber, step_bound
from .logconn import (
    LogConnection,
    SplittingType,
    degree,
    ensure_logarithmic,
    frame_inverse,
    fuchs_degree,
    global_sections,
    h0,
    hn_max_sub_fiber,
    max_part,
    residue,
    residue_matrix,
    splitting_type,
    twist,
)
from .moves import GaugeRecord, eigenvalue_of, elementary_transformation, verify_gauge_equivalence


def spacing_bounds(N, g, sigma):
    return (-N - N * N * (2 * g - 2 + sigma), 0)


def _require_finite(p):
    if p is INF:
        raise InfinitePoint("the working point must be finite")


def normalize_twist(conn, p):
    """Twist at p so that the largest splitting part becomes 0; returns (conn, ell)."""
    _require_finite(p)
    if conn.genus != 0:
        raise PreconditionViolated("normalization needs genus 0", clause="genus")
    ell = -max_part(conn)
    return twist(conn, ell, p), ell


def _simple_spectrum(conn, p):
    data = residue(conn, p).spectral_data
    if len(set(data.eigenvalues)) != len(data.eigenvalues):
        raise PreconditionViolated(f"residue spectrum at {format_point(p)} is not simple",
                                   clause="simple spectrum")
    return data


def choose_eigenvector(conn, p, top=None):
    """Eigenvector of the residue at p used for the next step of the induction.

    All parts negative: the eigenvector of the smallest eigenvalue.  Otherwise
    the smallest eigenvalue whose eigenvector is not in the fiber of the
    maximal destabilizing subbundle.
    """
    _require_finite(p)
    data = _simple_spectrum(conn, p)
    if top is None:
        top = max_part(conn)
    if top > 0:
        raise NotNormalized(f"maximal slope is {top}")
    values = data.distinct
    if top < 0:
        return data.eigenvectors(values[0])[0]
    fiber = hn_max_sub_fiber(conn, p, check=False)
    for lam in values:
        w = data.eigenvectors(lam)[0]
        if not in_span(w, fiber):
            return w
    raise NoEligibleEigenvector(f"every eigenvector at {format_point(p)} lies in the destabilizing fiber")


def semistabilize(conn, p):
    """Raise the degree to 0 one transformation at a time, keeping the maximal slope at 0."""
    _require_finite(p)
    if conn.genus != 0:
        raise PreconditionViolated("semistabilization needs genus 0", clause="genus")
    n = conn.rank
    M = required_gap(n, conn.genus, conn.sigma)
    data = _simple_spectrum(conn, p)
    if not gabber_conditions(data.eigenvalues, M)[1]:
        raise PreconditionViolated(f"integer eigenvalue gaps at {format_point(p)} are below {M}",
                                   clause="gaps")
    top = max_part(conn)
    if top != 0:
        raise PreconditionViolated(f"maximal slope is {top}, expected 0", clause="normalized")
    lo, hi = spacing_bounds(n, conn.genus, conn.sigma)
    deg = degree(conn)
    if not lo <= deg <= hi:
        raise PreconditionViolated(f"degree {deg} outside [{lo}, {hi}]", clause="spacing")
    cur = conn
    record = GaugeRecord.identity(p, n)
    entries = []
    trace = [deg]
    while deg < 0:
        w = choose_eigenvector(cur, p, top=0)
        lam = eigenvalue_of(residue_matrix(cur, p).constant_rows(), w)
        cur, rec = elementary_transformation(cur, p, w)
        record = record.then(rec)
        new_deg = degree(cur)
        new_top = max_part(cur)
        if new_deg != deg + 1 or new_top != 0:
            raise InternalAssertionFailure(
                f"loop invariant broken after step {len(entries) + 1}: degree {new_deg}, maximal slope {new_top}")
        fd = fuchs_degree(cur)
        if fd != new_deg:
            raise InternalAssertionFailure(f"Fuchs relation fails: {fd} != {new_deg}")
        deg = new_deg
        trace.append(deg)
        entries.append(StepEntry(len(entries) + 1, lam, w, residue(cur, p).spectrum, deg, fd))
    if h0(cur, -1) != 0 or h0(cur, 0) != n:
        raise InternalAssertionFailure("degree-0 result is not the trivial bundle")
    summary = {"M": M, "steps": len(entries), "degree_trace": tuple(trace),
               "spacing_bounds": (lo, hi)}
    return cur, StepLog(p, tuple(entries), record, summary)


def _is_trivial(conn):
    return degree(conn) == 0 and h0(conn, -1) == 0


def to_fuchsian(conn):
    """Residues B_q and the section basis V with V^-1 A V + V^-1 V' = sum B_q/(z - q)."""
    if conn.genus != 0 or not _is_trivial(conn):
        raise NotTrivialBundle("the underlying bundle is not trivial")
    n = conn.rank
    sections = global_sections(conn, 0)
    if len(sections) != n:
        raise InternalAssertionFailure("trivial bundle without a full set of sections")
    V = RatMatrix([[sections[j][i] for j in range(n)] for i in range(n)])
    Vinv = V.inverse()
    B = Vinv @ conn.A @ V + Vinv @ V.derivative()
    residues = {}
    total = RatMatrix.zero(n)
    rebuilt = RatMatrix.zero(n)
    for q in conn.marked:
        if q is INF:
            continue
        Bq = B.map(lambda x: RationalFunction(x.residue(q)))
        residues[q] = Bq
        total = total + Bq
        rebuilt = rebuilt + Bq * RationalFunction.power_of_linear(q, -1)
    if rebuilt != B:
        raise InternalAssertionFailure("transformed connection is not in partial-fraction form")
    if INF in conn.marked:
        residues[INF] = -total
    elif not total.is_zero():
        raise InternalAssertionFailure("residues do not sum to zero although infinity is unmarked")
    return residues, V


def fuchsian_from_residues(residues, marked, rank):
    A = RatMatrix.zero(rank)
    for q, Bq in residues.items():
        if q is not INF:
            A = A + Bq * RationalFunction.power_of_linear(q, -1)
    return LogConnection(rank=rank, marked=marked, A=A)


@dataclass
class PipelineReport:
    point: object
    input_summary: dict
    gabber: StepLog = None
    twist: int = None
    semistab: StepLog = None
    final_splitting: SplittingType = None
    residues: dict = None
    gauge: RatMatrix = None
    output: LogConnection = None
    spacing_trace: tuple = ()
    checks: dict = field(default_factory=dict)
    outcome: str = "running"

    @property
    def total_steps(self):
        return (len(self.gabber) if self.gabber else 0) + (len(self.semistab) if self.semistab else 0)


def _classes_mod_z(spectrum):
    return sorted(x - floor(x) for x in spectrum)


def summarize(conn):
    spectra = {}
    for q in conn.marked:
        try:
            spectra[q] = residue(conn, q).spectrum
        except Exception:
            spectra[q] = None
    return {"rank": conn.rank, "genus": conn.genus, "marked": conn.marked,
            "degree": degree(conn), "fuchs_degree": fuchs_degree(conn), "spectra": spectra}


def pipeline(conn, p):
    """Gabber spreading, normalization, semistabilization and retrivialization at p."""
    _require_finite(p)
    if conn.genus != 0:
        raise PreconditionViolated("the pipeline needs genus 0", clause="genus")
    if p not in conn.marked:
        raise PreconditionViolated(f"{format_point(p)} is not a marked point", clause="p in marked")
    ensure_logarithmic(conn)
    n = conn.rank
    spectrum_in = residue(conn, p).spectrum
    report = PipelineReport(point=p, input_summary=summarize(conn))
    M = required_gap(n, conn.genus, conn.sigma)
    checks = report.checks

    spread, glog = run_gabber(conn, p, M)
    report.gabber = glog
    checks["gabber_postconditions"] = all(glog.summary["checks"].values())

    normal, ell = normalize_twist(spread, p)
    report.twist = ell
    lo, hi = spacing_bounds(n, conn.genus, conn.sigma)
    deg = degree(normal)
    report.spacing_trace = (deg,)
    checks["fuchs_after_normalization"] = fuchs_degree(normal) == deg
    if not lo <= deg <= hi:
        report.outcome = "SpacingViolation"
        checks["spacing"] = False
        raise SpacingViolation(
            f"degree {deg} after normalization lies outside [{lo}, {hi}]; the input has an invariant subsheaf",
            report=report)

    try:
        final, slog = semistabilize(normal, p)
    except InternalAssertionFailure as exc:
        report.outcome = "LoopInvariantBroken"
        exc.report = report
        raise
    report.semistab = slog
    report.spacing_trace = slog.summary["degree_trace"]
    checks["spacing"] = all(lo <= d <= hi for d in report.spacing_trace)
    checks["semistab_steps_within_M"] = len(slog) <= M
    checks["fuchs_during_semistab"] = all(e.degree_after == e.fuchs_degree_after for e in slog.entries)
    checks["residues_off_p_unchanged"] = all(
        residue_matrix(final, q) == residue_matrix(conn, q) for q in conn.marked if q != p)

    residues, V = to_fuchsian(final)
    out = fuchsian_from_residues(residues, conn.marked, n)
    report.residues = residues
    report.output = out
    h = frame_inverse(conn, p) @ V
    report.gauge = h
    report.final_splitting = splitting_type(out)
    checks["final_trivial"] = report.final_splitting.parts == (0,) * n
    checks["final_degree_zero"] = degree(out) == 0 and fuchs_degree(out) == 0
    checks["gauge_equivalent_off_p"] = bool(verify_gauge_equivalence(conn, out, h, p))
    checks["total_steps_bound"] = report.total_steps <= step_bound(n, M) + M
    checks["classes_mod_z_preserved"] = (
        _classes_mod_z(spectrum_in) == _classes_mod_z(residue(out, p).spectrum))
    checks["conjugate_residues_off_p"] = all(
        char_poly(residue_matrix(out, q)) == char_poly(residue_matrix(conn, q))
        for q in conn.marked if q != p)
    failed = [k for k, v in checks.items() if not v]
    if failed:
        report.outcome = "CheckFailed"
        raise InternalAssertionFailure(f"pipeline checks failed: {', '.join(failed)}", report=report)
    report.outcome = "ok"
    return report
