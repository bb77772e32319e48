"""Rational functions in one variable over Q, kept in canonical reduced form."""

from fractions import Fraction

from flint import fmpq, fmpq_poly

from .points import INF
from .poly import ONE, X, ZERO, Polynomial, as_fraction, flint_key, linear, to_fmpq, to_fraction


def _normalize(n, d):
    if d.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if n.is_zero():
        return ZERO, ONE
    if d.degree() > 0:
        g = n.gcd(d)
        if g.degree() > 0:
            n = n // g
            d = d // g
    lc = d.leading_coefficient()
    if lc != 1:
        n = n / lc
        d = d / lc
    return n, d


def _as_flint_poly(x):
    if isinstance(x, fmpq_poly):
        return x
    if isinstance(x, Polynomial):
        return x.flint
    if isinstance(x, (int, Fraction, fmpq)):
        return fmpq_poly([to_fmpq(as_fraction(x))])
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def multiplicity(p, q):
    """Multiplicity of the root q of the flint polynomial p (p nonzero)."""
    if q == 0:
        i = 0
        while p[i] == 0:
            i += 1
        return i
    qq = to_fmpq(q)
    if p(qq) != 0:
        return 0
    lin = linear(q)
    deg = p.degree()
    lo, hi = 1, 2
    while hi <= deg and (p % lin ** hi).is_zero():
        lo, hi = hi, 2 * hi
    hi = min(hi, deg + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (p % lin ** mid).is_zero():
            lo = mid
        else:
            hi = mid
    return lo


def _reverse(p, degree):
    cs = p.coeffs()
    cs = cs + [fmpq(0)] * (degree + 1 - len(cs))
    return fmpq_poly(cs[::-1])


def _valuation(cs):
    for i, c in enumerate(cs):
        if c != 0:
            return i
    return None


def _series_divide(ncs, dcs, count):
    """First ``count`` coefficients of n/d as a power series (d[0] != 0)."""
    out = []
    d0 = dcs[0]
    e = len(dcs) - 1
    for k in range(count):
        acc = ncs[k] if k < len(ncs) else fmpq(0)
        for i in range(1, min(k, e) + 1):
            acc -= dcs[i] * out[k - i]
        out.append(acc / d0)
    return out


class RationalFunction:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, num=0, den=1):
        n, d = _normalize(_as_flint_poly(num), _as_flint_poly(den))
        self._n = n
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, n, d):
        obj = cls.__new__(cls)
        obj._n = n
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def _make(cls, n, d):
        n, d = _normalize(n, d)
        return cls._raw(n, d)

    @classmethod
    def z(cls):
        return cls._raw(X, ONE)

    @classmethod
    def constant(cls, c):
        return cls._raw(fmpq_poly([to_fmpq(as_fraction(c))]), ONE)

    @classmethod
    def power_of_linear(cls, q, k):
        """(z - q)^k for any integer k."""
        lin = linear(q)
        if k >= 0:
            return cls._raw(lin ** k, ONE)
        return cls._raw(fmpq_poly([1]), lin ** (-k))

    @property
    def num(self):
        return Polynomial(self._n)

    @property
    def den(self):
        return Polynomial(self._d)

    def is_zero(self):
        return self._n.is_zero()

    def is_polynomial(self):
        return self._d.degree() == 0

    def is_constant(self):
        return self._d.degree() == 0 and self._n.degree() <= 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return Fraction(0) if self._n.is_zero() else to_fraction(self._n.coeffs()[0])

    # arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self._n.is_zero():
            return other
        if other._n.is_zero():
            return self
        if self._d == other._d:
            if self._d.degree() == 0:
                return RationalFunction._raw(self._n + other._n, ONE)
            return RationalFunction._make(self._n + other._n, self._d)
        return RationalFunction._make(self._n * other._d + other._n * self._d, self._d * other._d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self._n, self._d)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self._n.is_zero() or other._n.is_zero():
            return RationalFunction._raw(ZERO, ONE)
        if self._d.degree() == 0 and other._d.degree() == 0:
            return RationalFunction._raw(self._n * other._n, ONE)
        n1, d2 = self._n, other._d
        n2, d1 = other._n, self._d
        if d2.degree() > 0:
            g = n1.gcd(d2)
            if g.degree() > 0:
                n1, d2 = n1 // g, d2 // g
        if d1.degree() > 0:
            g = n2.gcd(d1)
            if g.degree() > 0:
                n2, d1 = n2 // g, d1 // g
        n = n1 * n2
        d = d1 * d2
        lc = d.leading_coefficient()
        if lc != 1:
            n = n / lc
            d = d / lc
        return RationalFunction._raw(n, d)

    __rmul__ = __mul__

    def inverse(self):
        if self._n.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction._make(self._d, self._n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k):
        if k >= 0:
            return RationalFunction._raw(self._n ** k, self._d ** k)
        return self.inverse() ** (-k)

    def derivative(self):
        if self._d.degree() == 0:
            return RationalFunction._raw(self._n.derivative(), ONE)
        n, d = self._n, self._d
        return RationalFunction._make(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        xx = to_fmpq(as_fraction(x))
        dv = self._d(xx)
        if dv == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return to_fraction(self._n(xx) / dv)

    def substitute_inverse(self):
        """f(1/z)."""
        if self._n.is_zero():
            return self
        dn, dd = self._n.degree(), self._d.degree()
        n = _reverse(self._n, dn)
        d = _reverse(self._d, dd)
        shift = dd - dn
        if shift >= 0:
            n = n * X ** shift
        else:
            d = d * X ** (-shift)
        return RationalFunction._make(n, d)

    # local analysis

    def order_at(self, q):
        """Order of vanishing at q (negative for poles); None for the zero function."""
        if self._n.is_zero():
            return None
        if q is INF:
            return self._d.degree() - self._n.degree()
        return multiplicity(self._n, q) - multiplicity(self._d, q)

    def pole_order(self, q):
        o = self.order_at(q)
        return 0 if o is None else max(0, -o)

    def _local_series(self, q):
        """(v, n, d) with f = t^v * n(t)/d(t) near q, t the local coordinate, d(0) != 0."""
        if q is INF:
            dn, dd = self._n.degree(), self._d.degree()
            return dd - dn, _reverse(self._n, dn).coeffs(), _reverse(self._d, dd).coeffs()
        if q == 0:
            n, d = self._n, self._d
        else:
            shift = X + to_fmpq(q)
            n, d = self._n(shift), self._d(shift)
        ncs, dcs = n.coeffs(), d.coeffs()
        vn, vd = _valuation(ncs), _valuation(dcs)
        return vn - vd, ncs[vn:], dcs[vd:]

    def laurent_flint(self, q, lowest, highest):
        if highest < lowest:
            return []
        if self._n.is_zero():
            return [fmpq(0)] * (highest - lowest + 1)
        v, ncs, dcs = self._local_series(q)
        count = highest - v + 1
        series = _series_divide(ncs, dcs, count) if count > 0 else []
        out = []
        for k in range(lowest, highest + 1):
            i = k - v
            out.append(series[i] if 0 <= i < len(series) else fmpq(0))
        return out

    def laurent(self, q, lowest, highest):
        return [to_fraction(c) for c in self.laurent_flint(q, lowest, highest)]

    def residue(self, q):
        if self._n.is_zero():
            return Fraction(0)
        if q is INF:
            return -self.laurent(INF, 1, 1)[0]
        qq = to_fmpq(q)
        if self._d(qq) != 0:
            return Fraction(0)
        rest, rem = divmod(self._d, linear(q))
        rv = rest(qq)
        if rv != 0:
            return to_fraction(self._n(qq) / rv)
        return self.laurent(q, -1, -1)[0]

    # comparison

    def _key(self):
        return (flint_key(self._n), flint_key(self._d))

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._n == other._n and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        from .parse import format_rational_function

        return f"RationalFunction({format_rational_function(self)!r})"

    def __str__(self):
        from .parse import format_rational_function

        return format_rational_function(self)


def _coerce(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction.constant(x)
    if isinstance(x, Polynomial):
        return RationalFunction._raw(x.flint, ONE)
    return None


def as_ratfunc(x):
    r = _coerce(x)
    if r is None:
        raise TypeError(f"cannot convert {type(x).__name__} to a rational function")
    return r


def residue_at(f, q):
    """Residue of the one-form f(z)dz at q (q = INF uses w = 1/z)."""
    return as_ratfunc(f).residue(q)


def laurent_coefficients(f, q, lowest, highest):
    """Coefficients of t^k, lowest <= k <= highest, t = z - q (t = 1/z at INF)."""
    return as_ratfunc(f).laurent(q, lowest, highest)


def order_at(f, q):
    return as_ratfunc(f).order_at(q)
