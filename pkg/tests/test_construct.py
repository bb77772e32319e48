from fractions import Fraction as F

import pytest
import sympy

from conftest import sympy_matrix
from logfuchs.construct import NilpotentPair, RECORDED_PAIRS, irreducible_fuchsian, nilpotent_pair
from logfuchs.errors import RankTooSmall, ScreenFailed, ValidationError
from logfuchs.exactalg import INF
from logfuchs.logconn import degree, fuchs_degree, residue, residue_matrix, splitting_type
from logfuchs.verify import check_invariant_subsheaf, irreducibility_screen


def test_nilpotent_pair_examples():
    p = nilpotent_pair(2)
    assert p.M1 == ((0, 1), (0, 0)) and p.M2 == ((0, 0), (1, 0))
    p3 = nilpotent_pair(3)
    for m in (p3.M1, p3.M2):
        S = sympy_matrix(m)
        assert S ** 2 != sympy.zeros(3) and S ** 3 == sympy.zeros(3)
    with pytest.raises(RankTooSmall):
        nilpotent_pair(1)


def test_nilpotent_pair_validation():
    with pytest.raises(ValidationError):
        NilpotentPair(((0, 1), (0, 0)), ((0, 1), (0, 0)))
    with pytest.raises(ValidationError):
        NilpotentPair(((0, 0), (0, 0)), ((0, 0), (1, 0)))


def test_recorded_pair_is_valid():
    pair, scale = RECORDED_PAIRS[3]
    S = sympy_matrix(pair.M2)
    assert S ** 2 != sympy.zeros(3) and S ** 3 == sympy.zeros(3)
    top = sympy_matrix(pair.M1) + scale * S
    lam = sympy.Symbol("x")
    assert sorted((-top).eigenvals()) == [sympy.Rational(-3, 4), sympy.Rational(1, 4), sympy.Rational(1, 2)]


def test_rank2_example():
    c = irreducible_fuchsian(2, 0, 1, 2, scale=F(1, 4))
    assert [residue(c, q).spectrum for q in c.marked] == [(0, 0), (0, 0), (F(-1, 2), F(1, 2))]
    assert INF not in c.marked
    with pytest.raises(ScreenFailed):
        irreducible_fuchsian(2, 0, 1, 2, scale=1)
    with pytest.raises(ValidationError):
        irreducible_fuchsian(2, 0, 0, 2)
    with pytest.raises(ValidationError):
        irreducible_fuchsian(2, 0, 1, INF)
    with pytest.raises(ValidationError):
        irreducible_fuchsian(4, 0, 1, 2)


@pytest.mark.parametrize("N,pts", [(2, (0, 1, 2)), (2, (F(-1, 2), 3, 7)), (3, (0, 1, 2)), (3, (5, -1, F(1, 3)))])
def test_instance_invariants(N, pts):
    c = irreducible_fuchsian(N, *pts)
    assert degree(c) == 0 == fuchs_degree(c)
    assert splitting_type(c).parts == (0,) * N
    assert irreducibility_screen(c).certified
    q1, q2, p = (F(x) for x in pts)
    assert residue_matrix(c, p) == -(residue_matrix(c, q1) + residue_matrix(c, q2))
    for j in range(N):
        e = tuple(int(i == j) for i in range(N))
        assert not check_invariant_subsheaf(c, [e])
        others = [tuple(int(i == k) for i in range(N)) for k in range(N) if k != j]
        if N > 2:
            assert not check_invariant_subsheaf(c, others)
