"""Points of the projective line: rationals plus a point at infinity."""

from fractions import Fraction

from ..errors import ParseError


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_infinite(q):
    return q is INF


def as_point(q):
    if q is INF:
        return INF
    if isinstance(q, str):
        return parse_point(q)
    if isinstance(q, (int, Fraction)):
        return Fraction(q)
    raise TypeError(f"not a point: {q!r}")


def parse_point(text):
    s = text.strip()
    if s.lower() in ("inf", "infinity", "oo"):
        return INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"invalid point {text!r}", position=0, expected="rational or 'inf'") from None


def format_point(q):
    return "inf" if q is INF else str(q)


def point_key(q):
    """Sort key: finite points ascending, infinity last."""
    return (1, Fraction(0)) if q is INF else (0, q)


def sort_points(points):
    return tuple(sorted(set(points), key=point_key))
