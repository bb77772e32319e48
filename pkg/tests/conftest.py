"""Shared builders and independent oracles for the test suite."""

import random
from fractions import Fraction as F

import pytest
import sympy

from logfuchs.exactalg import INF, RatMatrix, RationalFunction
from logfuchs.logconn import LogConnection

Z = RationalFunction.z()
ZS = sympy.Symbol("z")


def to_sympy(f):
    """RationalFunction -> sympy expression in z."""
    num = sum(sympy.Rational(c.numerator, c.denominator) * ZS ** i for i, c in enumerate(f.num.coefficients))
    den = sum(sympy.Rational(c.numerator, c.denominator) * ZS ** i for i, c in enumerate(f.den.coefficients))
    return num / den


def sympy_matrix(rows):
    return sympy.Matrix([[sympy.Rational(F(x).numerator, F(x).denominator) for x in r] for r in rows])


def sympy_spectrum(rows):
    """Eigenvalue multiset from sympy, ascending, as Fractions (None if some root is irrational)."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy_matrix(rows).charpoly(x).as_expr(), x)
    out = []
    for root, mult in sympy.roots(poly).items():
        if not root.is_rational:
            return None
        out.extend([F(int(root.p), int(root.q))] * mult)
    if len(out) != len(rows):
        return None
    return tuple(sorted(out))


def random_fraction(rng, lo=-4, hi=4, dens=(1, 2, 3, 5)):
    return F(rng.randint(lo, hi), rng.choice(dens))


def random_unimodular(rng, n):
    """Random constant matrix with determinant +-1 built from elementary operations."""
    m = [[F(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = F(rng.randint(-2, 2))
        for k in range(n):
            m[i][k] += c * m[j][k]
    return m


def conjugate(P, D):
    Pm = sympy_matrix(P)
    out = Pm * sympy_matrix(D) * Pm.inv()
    return [[F(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in row] for row in out.tolist()]


def random_residue(rng, n, spectrum=None, jordan=True):
    """Constant matrix with prescribed rational spectrum, possibly non-diagonalizable."""
    spectrum = spectrum if spectrum is not None else [random_fraction(rng) for _ in range(n)]
    T = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        T[i][i] = F(spectrum[i])
        for j in range(i + 1, n):
            if jordan and rng.random() < 0.5:
                T[i][j] = F(rng.randint(-2, 2))
    return conjugate(random_unimodular(rng, n), T)


def fuchsian(residues, extra_marked=()):
    """Connection sum B_q/(z-q); infinity marked (residue minus the sum)."""
    n = len(next(iter(residues.values())))
    A = RatMatrix.zero(n)
    for q, B in residues.items():
        A = A + RatMatrix(B) * RationalFunction.power_of_linear(q, -1)
    return LogConnection(rank=n, marked=tuple(residues) + (INF,) + tuple(extra_marked), A=A)


def deg_minus3_rank2():
    """Irreducible rank-2 connection on O + O(-3), marked points 0, 1, 2, 3, inf; screen Certified."""
    pts = [F(i) for i in range(4)]
    lam = [F(-1, 3), F(2, 5), F(0), F(4, 3)]
    mu = [F(1, 5), F(2, 5), F(-1, 3), F(-4, 3)]
    al = [F(1), F(1), F(1), F(2)]
    D = RationalFunction(1)
    for q in pts:
        D = D * (Z - q)
    delta = [(1 / D).residue(q) for q in pts]
    be = [l + m - a for l, m, a in zip(lam, mu, al)]
    ga = [(a * b - l * m) / d for a, b, l, m, d in zip(al, be, lam, mu, delta)]

    def pf(cs):
        return sum((c / (Z - q) for c, q in zip(cs, pts)), RationalFunction(0))

    A = RatMatrix([[pf(al), pf(ga)], [1 / D, pf(be)]])
    return LogConnection(rank=2, marked=tuple(pts) + (INF,), A=A,
                         frames={INF: RatMatrix([[1, 0], [0, Z ** -3]])})


@pytest.fixture
def rng():
    return random.Random(20240607)


def shared_frame(rng, n, points=(F(0), F(1))):
    """Residues P T_q P^-1 with one unimodular P and upper-triangular T_q: rational spectra everywhere."""
    P = random_unimodular(rng, n)
    res = {}
    for q in points:
        T = [[F(0)] * n for _ in range(n)]
        for i in range(n):
            T[i][i] = random_fraction(rng)
            for j in range(i + 1, n):
                T[i][j] = F(rng.randint(-2, 2))
        res[q] = conjugate(P, T)
    return fuchsian(res)


def block_triangular(rng, sizes=(1, 1), points=(F(0), F(1))):
    """Fuchsian system whose residues are block upper-triangular in the standard basis."""
    n = sum(sizes)
    subs = [shared_frame(rng, s, points) for s in sizes]
    res = {}
    for q in points:
        B = [[F(0)] * n for _ in range(n)]
        start = 0
        for s, sub in zip(sizes, subs):
            blk = sub.A.map(lambda f: RationalFunction(f.residue(q))).constant_rows()
            for i in range(s):
                for j in range(s):
                    B[start + i][start + j] = blk[i][j]
                for j in range(start + s, n):
                    B[start + i][j] = random_fraction(rng)
            start += s
        res[q] = B
    return fuchsian(res)


# extension data

EXT_MARKED = {2: [(F(0), INF), (F(1), INF), (F(0), F(1))], 3: [(F(0), F(1), INF), (F(0), F(1), F(2))]}


def log_form(rng, marked, deg):
    """Random sum r_q/(z-q) over finite marked q, logarithmic on O(deg)."""
    finite = [q for q in marked if q is not INF]
    rs = [random_fraction(rng) for _ in finite]
    if INF not in marked:
        rs[-1] = -deg - sum(rs[:-1])
    return sum((r / (Z - q) for r, q in zip(rs, finite)), RationalFunction(0))


def extension_grid(rng):
    """ExtensionDatum grid: a-b in [-3, 0], sigma in {2, 3}, u in {0, 1/z, 1/z^2}."""
    from logfuchs.extension import ExtensionDatum

    out = []
    for c in range(-3, 1):
        a, b = 0, -c
        for sigma, sets in EXT_MARKED.items():
            for marked in sets:
                for u in (RationalFunction(0), 1 / Z, 1 / Z ** 2):
                    alpha_Q = log_form(rng, marked, b)
                    # equal forms give many zero classes, random ones mostly nonzero
                    for same in (True, False):
                        alpha_S = alpha_Q + F(b - a) * _shift_form(marked) if same else log_form(rng, marked, a)
                        out.append(ExtensionDatum(a, b, u, alpha_S, alpha_Q, marked))
    return out


def _shift_form(marked):
    """A log form with residue sum 1 over the finite marked points (0 if infinity is marked)."""
    finite = [q for q in marked if q is not INF]
    if INF in marked:
        return RationalFunction(0)
    return 1 / (Z - finite[0])


def _conditions_at_infinity(expr, need):
    """Coefficients that must vanish for expr to have order >= need at infinity."""
    num, den = sympy.fraction(sympy.together(expr))
    num = sympy.Poly(sympy.expand(num), ZS)
    den = sympy.Poly(sympy.expand(den), ZS)
    quo, rem = sympy.div(num, den)
    conds = list(quo.all_coeffs()) if not quo.is_zero else []
    top = den.degree()
    for (k,), coef in rem.terms():
        if k > top - need:
            conds.append(coef)
    return [c for c in conds if c != 0]


def sympy_lift_oracle(ext, K=10):
    """(lift exists, dimension of lift differences) from an undetermined-coefficient ansatz."""
    finite = [q for q in ext.marked if q is not INF]
    D = sympy.Integer(1)
    for q in finite:
        D *= ZS - sympy.Rational(q.numerator, q.denominator)
    ps = sympy.symbols(f"p0:{K + 1}")
    P = sum(p * ZS ** j for j, p in enumerate(ps))
    need = 1 if INF in ext.marked else 2
    du = to_sympy(ext.du())
    zc = ZS ** (-ext.c)
    conds = _conditions_at_infinity(zc * (P / D + du), need)
    sol = sympy.linsolve(conds, ps) if conds else sympy.FiniteSet(ps)
    exists = sol != sympy.S.EmptySet
    hom = _conditions_at_infinity(zc * P / D, need)
    if hom:
        M = sympy.Matrix([[sympy.diff(cnd, p) for p in ps] for cnd in hom])
        dim = len(ps) - M.rank()
    else:
        dim = len(ps)
    return exists, dim


# acceptance reporting

ACCEPTANCE_LINES = {}


def record_criterion(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
