"""Lifting rank-one log connections across an extension 0 -> O(a) -> E -> O(b) -> 0.

E is Q(z)^2 with the standard lattice on the affine line and the frame
[[z^a, z^b u], [0, z^b]] at infinity, so u is the Cech cocycle on the
overlap of the charts around 0 and around infinity.  A lift is
A = [[alpha_S, beta], [0, alpha_Q]]; it is logarithmic iff beta is a log form
on the affine chart and z^(b-a) (beta + du) is one on the chart at infinity,
with du = (alpha_S - alpha_Q) u + u'.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotLogarithmic, ObstructionNonzero, ValidationError
from .exactalg import INF, RatMatrix, RationalFunction, as_point, as_ratfunc, format_point, rref, sort_points
from .logconn import LogConnection, degree, ensure_logarithmic


def _z_power(k):
    return RationalFunction.power_of_linear(Fraction(0), k)


@dataclass(frozen=True)
class ExtensionDatum:
    a: int
    b: int
    u: RationalFunction
    alpha_S: RationalFunction
    alpha_Q: RationalFunction
    marked: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", as_ratfunc(self.u))
        object.__setattr__(self, "alpha_S", as_ratfunc(self.alpha_S))
        object.__setattr__(self, "alpha_Q", as_ratfunc(self.alpha_Q))
        object.__setattr__(self, "marked", sort_points(as_point(q) for q in self.marked))
        den = self.u.den
        if den.degree > 0 and den != _z_power(-den.degree).den:
            raise ValidationError("cocycle u must be regular away from 0 and infinity", cause="cocycle")
        for name, alpha, deg in (("d_S", self.alpha_S, self.a), ("d_Q", self.alpha_Q, self.b)):
            conn = line_connection(alpha, deg, self.marked)
            try:
                ensure_logarithmic(conn)
            except NotLogarithmic as exc:
                raise ValidationError(f"{name} is not logarithmic: {exc}", point=exc.point,
                                      cause="logarithmic") from exc

    @property
    def c(self):
        return self.a - self.b

    @property
    def sigma(self):
        return len(self.marked)

    @property
    def finite_marked(self):
        return tuple(q for q in self.marked if q is not INF)

    def du(self):
        return (self.alpha_S - self.alpha_Q) * self.u + self.u.derivative()


def line_connection(alpha, deg, marked):
    """d + alpha dz on O(deg)."""
    frames = {INF: RatMatrix([[_z_power(deg)]])} if deg else {}
    return LogConnection(rank=1, marked=tuple(marked), A=RatMatrix([[alpha]]), frames=frames)


@dataclass(frozen=True)
class ObstructionClass:
    """Class of du in H^1; coefficients of z^e dz for the listed window exponents."""

    exponents: tuple
    coefficients: tuple

    @property
    def is_zero(self):
        return all(x == 0 for x in self.coefficients)

    def as_dict(self):
        return {e: c for e, c in zip(self.exponents, self.coefficients) if c != 0}


def _laurent_terms(f):
    """f as {exponent: coefficient} when f is a Laurent polynomial in z."""
    num = f.num.coefficients
    dden = f.den.degree
    return {i - dden: c for i, c in enumerate(num) if c != 0}


def _split_finite_poles(ext, f):
    """(sum of r_q/(z-q) over finite nonzero marked q, Laurent remainder)."""
    poles = RationalFunction(0)
    for q in ext.finite_marked:
        if q == 0:
            continue
        r = f.residue(q)
        if r:
            poles = poles + RationalFunction.power_of_linear(q, -1) * r
    rest = f - poles
    if not rest.is_zero() and rest.den != _z_power(-rest.den.degree).den:
        raise ValidationError("du has poles off the marked points", cause="du")
    for q in ext.finite_marked:
        if q != 0 and f.pole_order(q) > 1:
            raise ValidationError(f"du has a higher-order pole at {format_point(q)}", point=q, cause="du")
    return poles, rest


def _window(ext):
    return list(range(ext.c - 1, 0))


def _relations(ext):
    """Window vectors of forms lying in the sum of the two chart spaces, with their splittings.

    Each entry is (vector, affine part, infinity part).
    """
    window = _window(ext)
    idx = {e: i for i, e in enumerate(window)}
    out = []
    if not window:
        return out
    if Fraction(0) in ext.marked:
        v = [Fraction(0)] * len(window)
        v[idx[-1]] = Fraction(1)
        out.append((v, _z_power(-1), RationalFunction(0)))
    if INF in ext.marked:
        v = [Fraction(0)] * len(window)
        v[idx[ext.c - 1]] = Fraction(1)
        out.append((v, RationalFunction(0), _z_power(ext.c - 1)))
    m = 1 - ext.c
    for q in ext.finite_marked:
        if q == 0:
            continue
        v = [Fraction(0)] * len(window)
        for k in range(1, m + 1):
            v[idx[-k]] = q ** (k - 1)
        pole = RationalFunction.power_of_linear(q, -1)
        tail = pole * _z_power(ext.c - 1) * (q ** m)
        out.append((v, pole, -tail))
    return out


def _decompose(ext):
    """(affine part, infinity part, window vector) of du before using relations."""
    poles, rest = _split_finite_poles(ext, ext.du())
    c = ext.c
    zero_marked = Fraction(0) in ext.marked
    inf_marked = INF in ext.marked
    p0 = poles
    p1 = RationalFunction(0)
    window = _window(ext)
    vec = [Fraction(0)] * len(window)
    for e, coef in sorted(_laurent_terms(rest).items()):
        term = _z_power(e) * coef
        if e >= 0 or (e == -1 and zero_marked):
            p0 = p0 + term
        elif e <= c - 2 or (e == c - 1 and inf_marked):
            p1 = p1 + term
        else:
            vec[window.index(e)] = coef
    return p0, p1, vec


def _reduce(vec, basis_rows, pivots):
    out = list(vec)
    for row, col in zip(basis_rows, pivots):
        if out[col] != 0:
            f = out[col]
            out = [x - f * y for x, y in zip(out, row)]
    return out


def obstruction_class(ext):
    """Normal form of the window part of du modulo the chart relations."""
    _, _, vec = _decompose(ext)
    window = _window(ext)
    rels = [r[0] for r in _relations(ext)]
    if rels:
        rows, pivots = rref(rels, len(window))
    else:
        rows, pivots = [], []
    reduced = _reduce(vec, rows, pivots)
    keep = [i for i in range(len(window)) if i not in pivots]
    return ObstructionClass(tuple(window[i] for i in keep), tuple(reduced[i] for i in keep))


def _solve_relations(ext, vec):
    """Coefficients lambda with sum lambda_i rel_i = vec, free ones set to 0."""
    rels = _relations(ext)
    n = len(_window(ext))
    if not rels:
        return []
    # columns are relations; augmented column is vec
    rows = [[rels[j][0][i] for j in range(len(rels))] + [vec[i]] for i in range(n)]
    red, pivots = rref(rows, len(rels) + 1)
    if len(rels) in pivots:
        raise ObstructionNonzero("window part is not a combination of relations")
    lam = [Fraction(0)] * len(rels)
    for row, col in zip(red, pivots):
        lam[col] = row[-1]
    return lam


def _denominator(ext):
    d = RationalFunction(1)
    for q in ext.finite_marked:
        d = d * RationalFunction.power_of_linear(q, 1)
    return d


def lift_space_basis(ext):
    """Basis z^j / prod(z - q) of log forms beta0 with z^(-c) beta0 logarithmic at infinity."""
    top = ext.c + ext.sigma - 2
    D = _denominator(ext)
    basis = [_z_power(j) / D for j in range(top + 1)]
    for beta in basis:
        if not _is_lift_difference(ext, beta):
            raise AssertionError("basis element is not a global log form")
    return basis


def _is_lift_difference(ext, beta):
    """beta is a log form on the affine chart and z^(-c) beta is one at infinity."""
    for q in ext.finite_marked:
        if beta.pole_order(q) > 1:
            return False
    D = _denominator(ext)
    if not (beta * D).is_polynomial():
        return False
    scaled = beta * _z_power(-ext.c)
    order = scaled.order_at(INF)
    need = 1 if INF in ext.marked else 2
    return order is None or order >= need


def lift_space_dimension(ext):
    return len(lift_space_basis(ext))


def lift_connection(ext, correction=None):
    """A logarithmic connection on E restricting to d_S and inducing d_Q."""
    cls = obstruction_class(ext)
    if not cls.is_zero:
        raise ObstructionNonzero(f"obstruction class {cls.as_dict()} is nonzero")
    p0, p1, vec = _decompose(ext)
    for lam, (_, aff, inf) in zip(_solve_relations(ext, vec), _relations(ext)):
        if lam:
            p0 = p0 + aff * lam
            p1 = p1 + inf * lam
    if p0 + p1 != ext.du():
        raise AssertionError("chart decomposition does not reproduce du")
    beta = -p0
    if correction is not None:
        correction = as_ratfunc(correction)
        if not _is_lift_difference(ext, correction):
            raise ValidationError("correction is not a global log form of the right degree", cause="correction")
        beta = beta + correction
    A = RatMatrix([[ext.alpha_S, beta], [0, ext.alpha_Q]])
    g = RatMatrix([[_z_power(ext.a), _z_power(ext.b) * ext.u], [0, _z_power(ext.b)]])
    conn = LogConnection(rank=2, marked=ext.marked, A=A, frames={INF: g})
    ensure_logarithmic(conn)
    if degree(conn) != ext.a + ext.b:
        raise AssertionError("lift has the wrong degree")
    return conn


def restrictions(conn):
    """(sub form, quotient form) of an upper-triangular rank-2 connection; None if not triangular."""
    if conn.rank != 2 or not conn.A[1, 0].is_zero():
        return None
    return conn.A[0, 0], conn.A[1, 1]
