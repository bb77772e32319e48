"""Irreducible Fuchsian fixtures from nilpotent residue pairs at two points."""

from dataclasses import dataclass
from fractions import Fraction

from .errors import RankTooSmall, ScreenFailed, ValidationError
from .exactalg import INF, RatMatrix, RationalFunction, as_point, constant_matrix
from .exactalg.linalg import identity, matmul, solve_kernel
from .logconn import LogConnection
from .verify import irreducibility_screen


def _power(a, k):
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def _is_zero(a):
    return all(x == 0 for row in a for x in row)


@dataclass(frozen=True)
class NilpotentPair:
    M1: tuple
    M2: tuple

    def __post_init__(self):
        m1 = tuple(tuple(Fraction(x) for x in row) for row in self.M1)
        m2 = tuple(tuple(Fraction(x) for x in row) for row in self.M2)
        object.__setattr__(self, "M1", m1)
        object.__setattr__(self, "M2", m2)
        n = len(m1)
        if n < 2:
            raise RankTooSmall(f"rank {n} is below 2")
        for name, m in (("M1", m1), ("M2", m2)):
            if not _is_zero(_power(m, n)) or _is_zero(_power(m, n - 1)):
                raise ValidationError(f"{name} is not a single nilpotent Jordan block", cause="nilpotent")
        kernel = solve_kernel(m1)
        top = _power(m2, n - 1)
        if all(_is_zero([[sum(top[i][k] * v[k] for k in range(n))] for i in range(n)]) for v in kernel):
            raise ValidationError("eigenvector of M1 lies in the kernel of M2^(N-1)", cause="kernel")

    @property
    def rank(self):
        return len(self.M1)


def _shift(n, upper):
    return tuple(tuple(Fraction(int(j == i + 1 if upper else i == j + 1)) for j in range(n)) for i in range(n))


def nilpotent_pair(N):
    """Upper and lower shift matrices of size N."""
    if N < 2:
        raise RankTooSmall(f"rank {N} is below 2")
    return NilpotentPair(_shift(N, True), _shift(N, False))


# The shift pair always gives eigenvalue 0 at p for N = 3, so every scale fails the screen.
# This pair gives spectrum {1/2, 1/4, -3/4} at p with scale 1.
RECORDED_PAIRS = {
    3: (NilpotentPair(_shift(3, True),
                      ((Fraction(-1, 2), -1, 0), (Fraction(7, 16), Fraction(-1, 4), -1),
                       (Fraction(-27, 64), 0, Fraction(3, 4)))),
        Fraction(1)),
}

DEFAULT_SCALES = {2: Fraction(1, 4)}


def default_fixture(N):
    """(pair, scale) used when the caller gives neither."""
    if N in RECORDED_PAIRS:
        return RECORDED_PAIRS[N]
    if N in DEFAULT_SCALES:
        return nilpotent_pair(N), DEFAULT_SCALES[N]
    raise ValidationError(f"no recorded scale for rank {N}; pass one explicitly", cause="scale")


def irreducible_fuchsian(N, q1, q2, p, scale=None, pair=None):
    """M1/(z-q1) + s M2/(z-q2) - (M1 + s M2)/(z-p), certified by the screen."""
    if N < 2:
        raise RankTooSmall(f"rank {N} is below 2")
    points = [as_point(q) for q in (q1, q2, p)]
    if any(q is INF for q in points) or len(set(points)) != 3:
        raise ValidationError("q1, q2, p must be distinct finite points", cause="points")
    q1, q2, p = points
    if pair is None:
        if scale is None:
            pair, scale = default_fixture(N)
        else:
            pair = nilpotent_pair(N)
    elif scale is None:
        scale = Fraction(1)
    if pair.rank != N:
        raise ValidationError(f"pair has rank {pair.rank}, expected {N}", cause="rank")
    scale = Fraction(scale)
    R1 = constant_matrix(pair.M1)
    R2 = constant_matrix(pair.M2) * scale
    A = (R1 * RationalFunction.power_of_linear(q1, -1)
         + R2 * RationalFunction.power_of_linear(q2, -1)
         - (R1 + R2) * RationalFunction.power_of_linear(p, -1))
    conn = LogConnection(rank=N, marked=(q1, q2, p), A=A)
    report = irreducibility_screen(conn)
    if not report.certified:
        raise ScreenFailed(f"screen is {report.verdict} for scale {scale}")
    return conn
