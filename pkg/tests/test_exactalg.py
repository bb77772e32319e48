from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ZS, sympy_matrix, sympy_spectrum, to_sympy
from logfuchs.errors import NonRationalSpectrum, NotConstant, NotSquare, ParseError
from logfuchs.exactalg import (
    INF,
    Polynomial,
    RatMatrix,
    RationalFunction,
    char_poly,
    format_rational_function,
    laurent_coefficients,
    parse_point,
    parse_rational_function,
    rational_spectrum,
    residue_at,
    solve_kernel,
)

Z = RationalFunction.z()

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_points = st.sampled_from([F(0), F(1), F(-1), F(1, 2), F(3)])


@st.composite
def rational_functions(draw):
    num = draw(st.lists(fractions, min_size=1, max_size=4))
    roots = draw(st.lists(small_points, max_size=3))
    f = RationalFunction(Polynomial(num))
    for r in roots:
        f = f / (Z - r)
    return f


def test_residue_examples():
    assert residue_at(1 / Z, F(0)) == 1
    f = (2 * Z + 3) / (Z * (Z - 1))
    assert [residue_at(f, q) for q in (F(0), F(1), INF)] == [-3, 5, -2]
    assert residue_at(1 / Z ** 2, F(0)) == 0


def test_residue_against_sympy():
    f = (2 * Z + 3) / (Z * (Z - 1))
    e = to_sympy(f)
    assert residue_at(f, F(0)) == sympy.residue(e, ZS, 0)
    assert residue_at(f, F(1)) == sympy.residue(e, ZS, 1)
    # at infinity: residue of f dz in w = 1/z
    w = sympy.Symbol("w")
    assert residue_at(f, INF) == sympy.residue(-e.subs(ZS, 1 / w) / w ** 2, w, 0)


def test_laurent_examples():
    assert laurent_coefficients(1 / (Z - 1), F(1), -2, 0) == [0, 1, 0]
    assert laurent_coefficients(Z / (Z - 1), F(1), -1, 0) == [1, 1]
    assert laurent_coefficients(Z ** 2, INF, -2, 0) == [1, 0, 0]


@settings(max_examples=60, deadline=None)
@given(rational_functions(), small_points)
def test_laurent_matches_sympy_series(f, q):
    t = sympy.Symbol("t")
    e = to_sympy(f).subs(ZS, t + sympy.Rational(q.numerator, q.denominator))
    series = sympy.series(e, t, 0, 3).removeO()
    ours = laurent_coefficients(f, q, -4, 2)
    theirs = [series.coeff(t, k) for k in range(-4, 3)]
    assert [sympy.Rational(x.numerator, x.denominator) for x in ours] == theirs


@settings(max_examples=60, deadline=None)
@given(rational_functions())
def test_residue_theorem(f):
    poles = {r for r in (F(0), F(1), F(-1), F(1, 2), F(3))}
    assert sum(residue_at(f, q) for q in poles) + residue_at(f, INF) == 0


@settings(max_examples=60, deadline=None)
@given(rational_functions(), small_points)
def test_derivatives_have_no_residue(f, q):
    assert residue_at(f.derivative(), q) == 0
    assert residue_at(f.derivative(), INF) == 0


@settings(max_examples=80, deadline=None)
@given(rational_functions(), rational_functions())
def test_exact_field_laws(a, b):
    assert (a + b) - b == a
    if not b.is_zero():
        assert (a * b) / b == a
    assert a * (b + 1) == a * b + a


@settings(max_examples=80, deadline=None)
@given(rational_functions())
def test_canonical_form_and_round_trip(f):
    assert f.den.leading_coefficient() == 1
    assert f.num.gcd(f.den).degree == 0
    assert parse_rational_function(format_rational_function(f)) == f
    assert sympy.simplify(to_sympy(f) - sympy.sympify(format_rational_function(f).replace("^", "**"),
                                                      locals={"z": ZS})) == 0


def test_parser_grammar():
    assert parse_rational_function("2z^2 - 3/4") == 2 * Z ** 2 - F(3, 4)
    assert parse_rational_function("(z-1)^(-2)") == 1 / (Z - 1) ** 2
    assert parse_rational_function("z^-1") == 1 / Z
    with pytest.raises(ParseError) as exc:
        parse_rational_function("1/(z")
    assert exc.value.position == 4
    with pytest.raises(ParseError):
        parse_rational_function("")
    with pytest.raises(ParseError):
        parse_rational_function("1/0")


def test_points():
    assert parse_point("inf") is INF
    assert parse_point("-3/4") == F(-3, 4)
    with pytest.raises(ParseError):
        parse_point("zz")


def test_char_poly_examples():
    assert char_poly([[2, 0], [0, 5]]).coefficients == (10, -7, 1)
    assert char_poly([[0, 0, 0]] * 3).coefficients == (0, 0, 0, 1)
    assert char_poly([[0, 1], [0, 0]]).coefficients == (0, 0, 1)
    with pytest.raises(NotSquare):
        char_poly(RatMatrix([[1, 2]]))
    with pytest.raises(NotConstant):
        char_poly(RatMatrix([[Z]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(fractions, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_char_poly_matches_sympy(rows):
    x = sympy.Symbol("x")
    theirs = sympy.Poly(sympy_matrix(rows).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    ours = char_poly(rows).coefficients
    assert [sympy.Rational(c.numerator, c.denominator) for c in ours] == theirs
    oracle = sympy_spectrum(rows)
    if oracle is None:
        with pytest.raises(NonRationalSpectrum):
            rational_spectrum(rows)
    else:
        spec = rational_spectrum(rows)
        assert spec.eigenvalues == oracle
        cp = char_poly(rows)
        for lam in spec.eigenvalues:
            assert cp(lam) == 0


def test_rational_spectrum_examples():
    spec = rational_spectrum([[2, 1], [0, 5]])
    assert spec.eigenvalues == (2, 5)
    assert spec.eigenvectors(2) == ((1, 0),)
    assert spec.eigenvectors(5) == ((1, 3),)
    ident = rational_spectrum([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert ident.eigenvalues == (1, 1, 1)
    assert len(ident.eigenvectors(1)) == 3
    with pytest.raises(NonRationalSpectrum):
        rational_spectrum([[0, 1], [-1, 0]])


def test_eigenvectors_normalized():
    spec = rational_spectrum([[3, 0, 0], [1, 3, 0], [0, 0, 7]])
    for lam in spec.distinct:
        for v in spec.eigenvectors(lam):
            first = next(x for x in v if x != 0)
            assert first == 1


def test_solve_kernel_examples():
    assert solve_kernel([[1, 0], [0, 1]]) == []
    assert solve_kernel([[0, 0], [0, 0]]) == [(1, 0), (0, 1)]
    (v,) = solve_kernel([[1, 2], [2, 4]])
    assert v == (-2, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                                                    min_size=1, max_size=4)))
def test_kernel_dimension_matches_sympy(rows):
    basis = solve_kernel(rows)
    M = sympy_matrix(rows)
    assert len(basis) == len(M.nullspace())
    for v in basis:
        assert M * sympy.Matrix(v) == sympy.zeros(len(rows), 1)


def test_matrix_inverse_and_det():
    M = RatMatrix([[Z, 1], [1 / (Z - 1), 2]])
    assert M @ M.inverse() == RatMatrix.identity(2)
    S = sympy.Matrix([[to_sympy(x) for x in row] for row in M.entries])
    assert sympy.simplify(to_sympy(M.det()) - S.det()) == 0
    N3 = RatMatrix([[Z, 1, 0], [0, Z - 1, 2], [1, 0, 1 / Z]])
    assert N3 @ N3.inverse() == RatMatrix.identity(3)
    S3 = sympy.Matrix([[to_sympy(x) for x in row] for row in N3.entries])
    assert sympy.simplify(to_sympy(N3.det()) - S3.det()) == 0
