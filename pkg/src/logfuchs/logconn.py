"""Logarithmic connections on bundles over P^1 in a lattice/frame model.

The bundle is described by a generic trivialization together with frames
``g_q`` at finitely many points: the lattice of E at q is the column span of
``g_q`` over the local ring.  The connection is ``d + A(z) dz`` in the generic
trivialization.  At infinity all local computations use ``w = 1/z``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType

from flint import fmpq, fmpq_mat

from .errors import (
    GenusNotSupported,
    InternalInconsistency,
    NotLogarithmic,
    NotNormalized,
    ValidationError,
)
from .exactalg import (
    INF,
    Polynomial,
    RatMatrix,
    RationalFunction,
    canonical_basis,
    format_point,
    rational_spectrum,
    sort_points,
)
from .exactalg.poly import linear, to_fraction
from .exactalg.ratfunc import multiplicity


@dataclass
class LocalData:
    frame: RatMatrix = None
    frame_inv: RatMatrix = None
    det: RationalFunction = None
    localized: RatMatrix = None
    gamma: RatMatrix = None


@dataclass(frozen=True, eq=False)
class LogConnection:
    rank: int
    marked: tuple
    A: RatMatrix
    frames: MappingProxyType = field(default_factory=dict)
    genus: int = 0
    _local: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = self.rank
        if not isinstance(n, int) or n < 1:
            raise ValidationError("rank must be a positive integer")
        if self.A.rows != n or self.A.cols != n:
            raise ValidationError(f"A must be {n}x{n}")
        object.__setattr__(self, "marked", sort_points(self.marked))
        ident = RatMatrix.identity(n)
        frames = {}
        for q, g in dict(self.frames).items():
            if g.rows != n or g.cols != n:
                raise ValidationError(f"frame at {format_point(q)} must be {n}x{n}", point=q)
            if g == ident:
                continue
            frames[q] = g
        frames = {q: frames[q] for q in sort_points(frames)}
        object.__setattr__(self, "frames", MappingProxyType(frames))
        if self._local.pop("_trusted", False):
            return
        for q, g in frames.items():
            if g.det().is_zero():
                raise ValidationError(f"frame at {format_point(q)} is singular", point=q)

    @property
    def sigma(self):
        return len(self.marked)

    def __eq__(self, other):
        if not isinstance(other, LogConnection):
            return NotImplemented
        return (self.rank == other.rank and self.genus == other.genus
                and self.marked == other.marked and self.A == other.A
                and dict(self.frames) == dict(other.frames))

    def __hash__(self):
        return hash((self.rank, self.genus, self.marked, self.A, tuple(self.frames.items())))

    def local(self, q):
        """Cached frame data at q (frame None means the standard lattice)."""
        data = self._local.get(q)
        if data is None:
            data = LocalData(frame=self.frames.get(q))
            self._local[q] = data
        return data

    def replace_frame(self, q, frame, seed):
        """New connection with the frame at q replaced; caches at other points are shared."""
        frames = dict(self.frames)
        frames[q] = frame
        new = LogConnection(rank=self.rank, marked=self.marked, A=self.A, frames=frames,
                            genus=self.genus, _local={"_trusted": True})
        for point, data in self._local.items():
            if point != q:
                new._local[point] = data
        if q in new.frames:
            new._local[q] = seed
        return new


def trivial_connection(rank, marked=()):
    return LogConnection(rank=rank, marked=marked, A=RatMatrix.zero(rank))


def fuchsian_connection(residues, rank=None):
    """d + sum_q B_q dz/(z - q) on the trivial bundle; infinity is marked iff the residues don't sum to 0."""
    finite = {q: RatMatrix([[Fraction(x) for x in row] for row in B]) if not isinstance(B, RatMatrix) else B
              for q, B in residues.items() if q is not INF}
    n = rank if rank is not None else next(iter(finite.values())).rows
    A = RatMatrix.zero(n)
    total = RatMatrix.zero(n)
    for q, B in finite.items():
        A = A + B * RationalFunction.power_of_linear(q, -1)
        total = total + B
    marked = list(finite)
    if not total.is_zero() or INF in residues:
        marked.append(INF)
    return LogConnection(rank=n, marked=marked, A=A)


# frames and localized matrices

def frame_at(conn, q):
    data = conn.local(q)
    return data.frame if data.frame is not None else RatMatrix.identity(conn.rank)


def frame_inverse(conn, q):
    data = conn.local(q)
    if data.frame is None:
        return RatMatrix.identity(conn.rank)
    if data.frame_inv is None:
        data.frame_inv = data.frame.inverse()
    return data.frame_inv


def frame_det(conn, q):
    data = conn.local(q)
    if data.frame is None:
        return RationalFunction(1)
    if data.det is None:
        data.det = data.frame.det()
    return data.det


def localized_matrix(conn, q):
    """g^-1 A g + g^-1 g' at q; at infinity the result is expressed in w = 1/z."""
    data = conn.local(q)
    if data.localized is not None:
        return data.localized
    if q is INF:
        w = RationalFunction.z()
        A = conn.A.substitute_inverse() * (-(w ** -2))
        if data.frame is None:
            loc = A
        else:
            g = data.frame.substitute_inverse()
            gi = frame_inverse(conn, q).substitute_inverse()
            loc = gi @ A @ g + gi @ g.derivative()
    elif data.frame is None:
        loc = conn.A
    else:
        g = data.frame
        gi = frame_inverse(conn, q)
        loc = gi @ conn.A @ g + gi @ g.derivative()
    data.localized = loc
    return loc


def _local_coordinate(q):
    return Fraction(0) if q is INF else q


def pole_order(conn, q):
    loc = localized_matrix(conn, q)
    t = _local_coordinate(q)
    return max(x.pole_order(t) for row in loc.entries for x in row)


def _special_points(conn):
    points = set(conn.marked) | set(conn.frames) | {INF}
    return sort_points(points)


def logarithmic_defect(conn):
    """None if logarithmic everywhere, else (point, pole order, description)."""
    known = _special_points(conn)
    for q in known:
        order = pole_order(conn, q)
        allowed = 1 if q in conn.marked else 0
        if order > allowed:
            return q, order, f"pole of order {order} at {format_point(q)}"
    finite = [q for q in known if q is not INF]
    for row in conn.A.entries:
        for x in row:
            d = x.den.flint
            for q in finite:
                k = multiplicity(d, q)
                if k:
                    d = d // (linear(q) ** k)
            if d.degree() > 0:
                roots = d.roots()
                if roots:
                    q = to_fraction(roots[0][0])
                    return q, x.pole_order(q), f"pole at unmarked point {q}"
                return None, None, "pole at an irrational point"
    return None


def is_logarithmic(conn, q=None):
    if q is not None:
        return pole_order(conn, q) <= (1 if q in conn.marked else 0)
    return logarithmic_defect(conn) is None


def ensure_logarithmic(conn):
    defect = logarithmic_defect(conn)
    if defect is not None:
        raise NotLogarithmic(f"not logarithmic: {defect[2]}", point=defect[0])


# residues

@dataclass(frozen=True)
class ResidueData:
    point: object
    gamma: RatMatrix

    @cached_property
    def spectral_data(self):
        return rational_spectrum(self.gamma)

    @property
    def spectrum(self):
        return self.spectral_data.eigenvalues

    def trace(self):
        return sum((row[i] for i, row in enumerate(self.gamma.constant_rows())), Fraction(0))


def residue_matrix(conn, q):
    data = conn.local(q)
    if data.gamma is None:
        loc = localized_matrix(conn, q)
        t = _local_coordinate(q)
        order = max(x.pole_order(t) for row in loc.entries for x in row)
        if order > 1:
            raise NotLogarithmic(f"pole of order {order} at {format_point(q)} in the local frame", point=q)
        data.gamma = RatMatrix([[x.residue(t) for x in row] for row in loc.entries])
    return data.gamma


def residue(conn, q):
    return ResidueData(q, residue_matrix(conn, q))


def degree(conn):
    return -sum(frame_det(conn, q).order_at(q) for q in conn.frames)


def fuchs_degree(conn):
    ensure_logarithmic(conn)
    return -sum((residue(conn, q).trace() for q in conn.marked), Fraction(0))


# sections

def _require_genus_zero(conn):
    if conn.genus != 0:
        raise GenusNotSupported("bundle realization is only available in genus 0")


def _min_order(matrix, q):
    orders = [x.order_at(q) for row in matrix.entries for x in row if not x.is_zero()]
    return min(orders) if orders else 0


def _pole_bounds(conn):
    """(e_q) with g_q O^N inside (z-q)^-e_q O^N at every framed point."""
    return {q: max(0, -_min_order(g, q)) for q, g in conn.frames.items()}


def _section_system(conn, m):
    """Linear constraints for H^0(E(m)) in the unknowns of P, where v = P/D."""
    n = conn.rank
    e = _pole_bounds(conn)
    finite = [q for q in e if q is not INF and e[q] > 0]
    d = m + sum(e.values())
    if d < 0:
        return None
    D = RationalFunction(1)
    for q in finite:
        D = D * RationalFunction.power_of_linear(q, e[q])
    width = d + 1
    rows = []
    for q in conn.frames:
        if q is INF:
            G = frame_inverse(conn, q) * (RationalFunction.z() ** (-m) / D)
        else:
            G = frame_inverse(conn, q) * D.inverse()
        omin = _min_order(G, q)
        if q is INF:
            lowest = omin - d
            if lowest > -1:
                continue
            for r in range(n):
                series = [G[r, i].laurent_flint(INF, omin, d - 1) for i in range(n)]
                for s in range(lowest, 0):
                    row = [fmpq(0)] * (n * width)
                    for i in range(n):
                        ser = series[i]
                        for j in range(width):
                            k = s + j - omin
                            if 0 <= k < len(ser):
                                row[i * width + j] = ser[k]
                    rows.append(row)
        else:
            if omin >= 0:
                continue
            qq = fmpq(q.numerator, q.denominator)
            span = -omin
            for r in range(n):
                row_block = [[fmpq(0)] * (n * width) for _ in range(span)]
                for i in range(n):
                    cur = G[r, i].laurent_flint(q, omin, -1)
                    for j in range(width):
                        for o in range(span):
                            row_block[o][i * width + j] = cur[o]
                        nxt = [fmpq(0)] * span
                        for o in range(span):
                            nxt[o] = (cur[o - 1] if o > 0 else fmpq(0)) + qq * cur[o]
                        cur = nxt
                rows.extend(row_block)
    return d, D, rows


def _rref_flint(rows, ncols):
    mat = fmpq_mat(len(rows), ncols, [x for row in rows for x in row])
    red, rk = mat.rref()
    pivots = []
    for i in range(rk):
        for c in range(ncols):
            if red[i, c] != 0:
                pivots.append(c)
                break
    return red, rk, pivots


def h0(conn, m):
    """dim H^0(E(m))."""
    _require_genus_zero(conn)
    system = _section_system(conn, m)
    if system is None:
        return 0
    d, _, rows = system
    unknowns = conn.rank * (d + 1)
    if not rows:
        return unknowns
    _, rk, _ = _rref_flint(rows, unknowns)
    return unknowns - rk


def global_sections(conn, m):
    """Basis of H^0(E(m)) as vectors of rational functions, in reduced echelon form."""
    _require_genus_zero(conn)
    system = _section_system(conn, m)
    if system is None:
        return []
    d, D, rows = system
    n = conn.rank
    width = d + 1
    unknowns = n * width
    if rows:
        red, rk, pivots = _rref_flint(rows, unknowns)
        free = [c for c in range(unknowns) if c not in set(pivots)]
        kernel = []
        for f in free:
            v = [Fraction(0)] * unknowns
            v[f] = Fraction(1)
            for i, c in enumerate(pivots):
                v[c] = -to_fraction(red[i, f])
            kernel.append(v)
    else:
        kernel = [[Fraction(int(i == j)) for j in range(unknowns)] for i in range(unknowns)]
    if kernel and rows:
        kred, _, _ = _rref_flint([[fmpq(x.numerator, x.denominator) for x in v] for v in kernel], unknowns)
        kernel = [[to_fraction(kred[i, c]) for c in range(unknowns)] for i in range(len(kernel))]
    Dinv = D.inverse()
    out = []
    for v in kernel:
        vec = []
        for i in range(n):
            coeffs = v[i * width:(i + 1) * width]
            vec.append(RationalFunction(Polynomial(coeffs)) * Dinv)
        out.append(tuple(vec))
    return out


# splitting type

@dataclass(frozen=True)
class SplittingType:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def degree(self):
        return sum(self.parts)

    def h0(self, m):
        return sum(max(0, a + m + 1) for a in self.parts)

    def __str__(self):
        return ",".join(str(a) for a in self.parts)


@dataclass(frozen=True)
class SlopeProfile:
    slopes: tuple

    def __iter__(self):
        return iter(self.slopes)

    @property
    def max_slope(self):
        return self.slopes[0][0]


def _part_bounds(conn):
    hi = sum(_pole_bounds(conn).values())
    lo = 0
    for q in conn.frames:
        lo -= max(0, -_min_order(frame_inverse(conn, q), q))
    return lo, hi


def splitting_type(conn):
    _require_genus_zero(conn)
    n = conn.rank
    deg = degree(conn)
    lo, hi = _part_bounds(conn)
    start = min(-hi - 1, -deg - n - 1, deg + n + 1)
    stop = max(-lo, -deg - n - 1, deg + n + 1)
    profile = {m: h0(conn, m) for m in range(start, stop + 1)}
    parts = []
    for c in range(hi, lo - 1, -1):
        at_least = profile[-c] - profile[-c - 1]
        above = profile[-c - 1] - profile[-c - 2] if -c - 2 >= start else 0
        parts.extend([c] * (at_least - above))
    st = SplittingType(tuple(parts))
    if len(st.parts) != n or st.degree != deg or any(st.h0(m) != h for m, h in profile.items()):
        raise InternalInconsistency(f"h0 profile {profile} matches no splitting type of degree {deg}")
    return st


def max_part(conn):
    """Largest a_i, found by bisection on h0(E(-c)) > 0."""
    _require_genus_zero(conn)
    lo, hi = _part_bounds(conn)
    if h0(conn, -lo) == 0:
        raise InternalInconsistency("no sections above the lower part bound")
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if h0(conn, -mid) > 0:
            lo = mid
        else:
            hi = mid - 1
    return lo


def hn_slopes(conn_or_type):
    st = conn_or_type if isinstance(conn_or_type, SplittingType) else splitting_type(conn_or_type)
    slopes = []
    for a in st.parts:
        if slopes and slopes[-1][0] == a:
            slopes[-1] = (a, slopes[-1][1] + 1)
        else:
            slopes.append((a, 1))
    return SlopeProfile(tuple((Fraction(a), r) for a, r in slopes))


def fiber_value(conn, q, v):
    """(g_q^-1 v)(q) for a section v regular in the local frame."""
    gi = frame_inverse(conn, q)
    t = _local_coordinate(q)
    out = []
    for r in range(conn.rank):
        s = RationalFunction(0)
        for i in range(conn.rank):
            if not gi[r, i].is_zero() and not v[i].is_zero():
                s = s + gi[r, i] * v[i]
        if q is INF:
            out.append(s.laurent(INF, 0, 0)[0])
        else:
            out.append(s.laurent(t, 0, 0)[0])
    return tuple(out)


def hn_max_sub_fiber(conn, q, check=True):
    """Canonical basis of E_1 (x) k(q) when the maximal slope is 0."""
    _require_genus_zero(conn)
    if check:
        top = max_part(conn)
        if top != 0:
            raise NotNormalized(f"maximal slope is {top}, expected 0")
    sections = global_sections(conn, 0)
    return canonical_basis([fiber_value(conn, q, v) for v in sections], conn.rank)


# twisting

def twist(conn, ell, p):
    """E(ell p): frame at p times (z-p)^-ell; the residue at p becomes Gamma - ell Id."""
    if p is INF:
        raise ValueError("twist point must be finite")
    if ell == 0:
        return conn
    n = conn.rank
    s = RationalFunction.power_of_linear(p, -ell)
    old = conn.local(p)
    frame = frame_at(conn, p) * s
    seed = LocalData(frame=frame)
    seed.frame_inv = frame_inverse(conn, p) * s.inverse()
    seed.det = frame_det(conn, p) * s ** n
    tinv = RationalFunction.power_of_linear(p, -1)
    shift = RatMatrix.scalar(n, tinv * (-ell))
    seed.localized = localized_matrix(conn, p) + shift
    if old.gamma is not None:
        seed.gamma = old.gamma - RatMatrix.scalar(n, ell)
    return conn.replace_frame(p, frame, seed)
