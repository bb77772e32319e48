"""Elementary transformations at a point and gauge verification away from it."""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InfinitePoint, NotEigenvector, NotInSpectrum, NotLogarithmic
from .exactalg import INF, RatMatrix, RationalFunction, constant_matrix, format_point, sort_points
from .exactalg import linalg
from .exactalg.poly import linear, to_fraction
from .exactalg.ratfunc import multiplicity
from .logconn import (
    LocalData,
    frame_at,
    frame_det,
    frame_inverse,
    localized_matrix,
    residue_matrix,
)


@dataclass(frozen=True)
class Step:
    eigenvalue: Fraction
    eigenvector: tuple
    completion: tuple


@dataclass(frozen=True)
class GaugeRecord:
    point: object
    steps: tuple
    cumulative_gauge: RatMatrix
    cumulative_inverse: RatMatrix = None

    @classmethod
    def identity(cls, p, n):
        ident = RatMatrix.identity(n)
        return cls(p, (), ident, ident)

    def then(self, other):
        """Record of self followed by other (gauges multiply on the right)."""
        if other.point != self.point:
            raise ValueError("gauge records at different points")
        inv = None
        if self.cumulative_inverse is not None and other.cumulative_inverse is not None:
            inv = other.cumulative_inverse @ self.cumulative_inverse
        return GaugeRecord(self.point, self.steps + other.steps,
                           self.cumulative_gauge @ other.cumulative_gauge, inv)


def completion(w):
    """Columns: w, then the standard basis vectors other than w's pivot, in index order."""
    n = len(w)
    piv = next((i for i, x in enumerate(w) if x != 0), None)
    if piv is None:
        raise NotEigenvector("zero vector")
    cols = [tuple(Fraction(x) for x in w)]
    cols += [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n) if j != piv]
    return tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))


def eigenvalue_of(gamma, w):
    """lambda with gamma w = lambda w, or None."""
    gw = linalg.matvec(gamma, w)
    piv = next(i for i, x in enumerate(w) if x != 0)
    lam = gw[piv] / w[piv]
    if all(a == lam * b for a, b in zip(gw, w)):
        return lam
    return None


def _scale_col0(M, f):
    return RatMatrix._raw(tuple((row[0] * f,) + row[1:] for row in M.entries))


def _scale_row0(M, f):
    rows = M.entries
    return RatMatrix._raw((tuple(x * f for x in rows[0]),) + rows[1:])


def elementary_transformation(conn, p, w, check=True):
    """E_w for an eigenvector w of the residue at p.

    Returns (new connection, GaugeRecord).  With check=False a non-eigenvector
    is pushed through unchanged so that the failure can be observed.
    """
    if p is INF:
        raise InfinitePoint("elementary transformations at infinity are not supported")
    n = conn.rank
    w = tuple(Fraction(x) for x in w)
    if len(w) != n:
        raise NotEigenvector(f"vector of length {len(w)} for rank {n}")
    gamma = residue_matrix(conn, p).constant_rows()
    if all(x == 0 for x in w):
        raise NotEigenvector("zero vector")
    lam = eigenvalue_of(gamma, w)
    if lam is None and check:
        raise NotEigenvector(f"{w} is not an eigenvector of the residue at {format_point(p)}")
    C = completion(w)
    Cinv = linalg.inverse(C)
    Cm, Cim = constant_matrix(C), constant_matrix(Cinv)
    t = RationalFunction.power_of_linear(p, 1)
    tinv = RationalFunction.power_of_linear(p, -1)

    frame = _scale_col0(frame_at(conn, p) @ Cm, tinv)
    seed = LocalData(frame=frame)
    seed.frame_inv = _scale_row0(Cim @ frame_inverse(conn, p), t)
    piv = next(i for i, x in enumerate(w) if x != 0)
    seed.det = frame_det(conn, p) * ((-1) ** piv * w[piv]) * tinv
    conj = Cim @ localized_matrix(conn, p) @ Cm
    conj = _scale_col0(_scale_row0(conj, t), tinv)
    rows = [list(r) for r in conj.entries]
    rows[0][0] = rows[0][0] - tinv
    seed.localized = RatMatrix._raw(tuple(tuple(r) for r in rows))
    new = conn.replace_frame(p, frame, seed)
    if check:
        order = max(x.pole_order(p) for row in seed.localized.entries for x in row)
        if order > 1:
            raise NotLogarithmic(f"transformed connection has a pole of order {order}", point=p)
    gauge = _scale_col0(Cm, tinv)
    gauge_inv = _scale_row0(Cim, t)
    record = GaugeRecord(p, (Step(lam, w, C),), gauge, gauge_inv)
    return new, record


def spectrum_after(spectrum, lam):
    lam = Fraction(lam)
    values = [Fraction(x) for x in spectrum]
    if lam not in values:
        raise NotInSpectrum(f"{lam} is not in the spectrum {values}")
    values.remove(lam)
    values.append(lam - 1)
    return tuple(sorted(values))


@dataclass(frozen=True)
class GaugeCheck:
    ok: bool
    reason: str

    def __bool__(self):
        return self.ok


def _fail(reason):
    return GaugeCheck(False, reason)


def _points_of(matrices, exclude):
    """Rational poles of the entries; None if some pole is irrational."""
    found = set()
    for M in matrices:
        for row in M.entries:
            for x in row:
                d = x.den.flint
                for q in list(exclude) + sorted(found):
                    k = multiplicity(d, q)
                    if k:
                        d = d // (linear(q) ** k)
                if d.degree() <= 0:
                    continue
                for r, k in d.roots():
                    q = to_fraction(r)
                    found.add(q)
                    d = d // (linear(q) ** k)
                if d.degree() > 0:
                    return None
    return found


def _regular_at(M, q):
    return all(x.is_zero() or x.order_at(q) >= 0 for row in M.entries for x in row)


def verify_gauge_equivalence(a, b, h, p, h_inverse=None):
    """Check that b is obtained from a by the change of frame h at p and agrees with a elsewhere.

    Clauses, in order: shapes and marked points off p; the identity
    loc_b = h^-1 loc_a h + h^-1 h' at p; equality of the lattices of a and b at
    every other point (via T = g^a_p h (g^b_p)^-1); determinant support.
    """
    n = a.rank
    if b.rank != n or h.rows != n or h.cols != n:
        return _fail("shape mismatch")
    if tuple(q for q in a.marked if q != p) != tuple(q for q in b.marked if q != p):
        return _fail("marked points differ away from p")
    if h.det().is_zero():
        return _fail("gauge is singular")
    hinv = h_inverse if h_inverse is not None else h.inverse()
    expected = hinv @ localized_matrix(a, p) @ h + hinv @ h.derivative()
    if expected != localized_matrix(b, p):
        return _fail(f"connection matrices are not gauge related at {format_point(p)}")
    T = frame_at(a, p) @ h @ frame_inverse(b, p)
    Tinv = frame_at(b, p) @ hinv @ frame_inverse(a, p)
    framed = (set(a.frames) | set(b.frames) | {INF}) - {p}
    finite = [q for q in framed if q is not INF] + [p]
    extra = _points_of([T, Tinv], finite)
    if extra is None:
        return _fail("gauge has a singularity at an irrational point")
    for q in sort_points(framed | extra):
        X = frame_inverse(a, q) @ T @ frame_at(b, q)
        Xi = frame_inverse(b, q) @ Tinv @ frame_at(a, q)
        if not (_regular_at(X, q) and _regular_at(Xi, q)):
            return _fail(f"frame mismatch at {format_point(q)}")
    dT = T.det()
    for q in sort_points(framed | extra):
        want = frame_det(a, q).order_at(q) - frame_det(b, q).order_at(q)
        if dT.order_at(q) != want:
            return _fail(f"determinant of the gauge vanishes or has a pole at {format_point(q)}")
    return GaugeCheck(True, "ok")
