"""Univariate polynomials over Q backed by FLINT's fmpq_poly."""

from fractions import Fraction

from flint import fmpq, fmpq_poly


def to_fmpq(x):
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def to_fraction(x):
    return Fraction(int(x.p), int(x.q))


def as_fraction(x):
    """Coerce int, Fraction or fmpq to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, fmpq):
        return to_fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


X = fmpq_poly([0, 1])
ONE = fmpq_poly([1])
ZERO = fmpq_poly([])


def linear(q):
    """The flint polynomial z - q."""
    return fmpq_poly([-to_fmpq(q), 1])


def flint_key(p):
    return tuple(str(c) for c in p.coeffs())


class Polynomial:
    """Dense polynomial in z with rational coefficients (index = degree)."""

    __slots__ = ("_p",)

    def __init__(self, coefficients=()):
        if isinstance(coefficients, fmpq_poly):
            self._p = coefficients
        else:
            self._p = fmpq_poly([to_fmpq(as_fraction(c)) for c in coefficients])

    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    @property
    def flint(self):
        return self._p

    @property
    def coefficients(self):
        return tuple(to_fraction(c) for c in self._p.coeffs())

    @property
    def degree(self):
        return self._p.degree()

    def is_zero(self):
        return self._p.is_zero()

    def leading_coefficient(self):
        if self._p.is_zero():
            return Fraction(0)
        return to_fraction(self._p.leading_coefficient())

    def __call__(self, x):
        return to_fraction(self._p(to_fmpq(as_fraction(x))))

    def derivative(self):
        return Polynomial(self._p.derivative())

    def gcd(self, other):
        return Polynomial(self._p.gcd(other._p))

    def __add__(self, other):
        other = _coerce(other)
        return Polynomial(self._p + other._p) if other is not None else NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Polynomial(self._p - other._p) if other is not None else NotImplemented

    def __rsub__(self, other):
        other = _coerce(other)
        return Polynomial(other._p - self._p) if other is not None else NotImplemented

    def __mul__(self, other):
        other = _coerce(other)
        return Polynomial(self._p * other._p) if other is not None else NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self._p)

    def __pow__(self, k):
        return Polynomial(self._p ** k)

    def __divmod__(self, other):
        q, r = divmod(self._p, other._p)
        return Polynomial(q), Polynomial(r)

    def __floordiv__(self, other):
        return Polynomial(self._p // other._p)

    def __mod__(self, other):
        return Polynomial(self._p % other._p)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._p == other._p

    def __hash__(self):
        return hash(flint_key(self._p))

    def __repr__(self):
        return f"Polynomial({list(self.coefficients)!r})"


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial([x])
    return None
