"""Invariant subsheaf checks, rank-one residue integrality and the irreducibility screen."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import FullRank, NotLogarithmic, NotRankOne, ZeroSubsheaf
from .exactalg import RatMatrix, as_ratfunc
from .exactalg.matrix import matrix_rank
from .logconn import degree, residue


def _as_vector(v, n):
    vec = tuple(as_ratfunc(x) for x in v)
    if len(vec) != n:
        raise ValueError(f"generator of length {len(vec)} for rank {n}")
    return vec


def check_invariant_subsheaf(conn, generators):
    """True iff d + A maps the Q(z)-span of the generators into itself."""
    n = conn.rank
    gens = [_as_vector(v, n) for v in generators]
    r = matrix_rank([list(v) for v in gens]) if gens else 0
    if r == 0:
        raise ZeroSubsheaf("generators span the zero subsheaf")
    if r == n:
        raise FullRank("generators span the whole bundle")
    A = conn.A
    for v in gens:
        col = RatMatrix([[x] for x in v])
        image = A @ col + col.derivative()
        image = tuple(image[i, 0] for i in range(n))
        if matrix_rank([list(g) for g in gens] + [list(image)]) != r:
            return False
    return True


def residue_integrality_rank1(conn):
    """Residue theorem for a line bundle; with one marked point the residue must be the integer -deg."""
    if conn.rank != 1:
        raise NotRankOne(f"rank is {conn.rank}")
    deg = degree(conn)
    try:
        values = [residue(conn, q).gamma.constant_rows()[0][0] for q in conn.marked]
    except NotLogarithmic:
        return False
    if sum(values, Fraction(0)) != -deg:
        return False
    if len(values) == 1:
        return values[0].denominator == 1 and values[0] == -deg
    return True


@dataclass(frozen=True)
class ScreenReport:
    points: tuple
    spectra: tuple
    flagged: dict

    @property
    def verdict(self):
        return "Certified" if self.certified else "Inconclusive"

    @property
    def certified(self):
        return all(not sel for sel in self.flagged.values())


def _submultisets(values, r):
    seen = []
    for combo in combinations(sorted(values), r):
        if combo not in seen:
            seen.append(combo)
    return seen


def irreducibility_screen(conn):
    """Flag every choice of r eigenvalues per marked point whose grand total is an integer."""
    points = conn.marked
    spectra = tuple(tuple(residue(conn, q).spectrum) for q in points)
    flagged = {}
    for r in range(1, conn.rank):
        options = [_submultisets(s, r) for s in spectra]
        hits = []
        for choice in product(*options):
            total = sum((sum(c, Fraction(0)) for c in choice), Fraction(0))
            if total.denominator == 1:
                hits.append(choice)
        flagged[r] = hits
    return ScreenReport(points, spectra, flagged)
