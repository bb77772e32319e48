"""Text syntax for rational functions in z.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary | atom)*      # juxtaposition multiplies
    unary  := ("+" | "-") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | "z" | "(" expr ")"
"""

from fractions import Fraction

from ..errors import ParseError
from .ratfunc import RationalFunction


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            raise ParseError("unexpected " + (repr(self.peek()) if self.peek() else "end of input"),
                             position=self.pos, expected=repr(ch))
        self.pos += 1

    def parse(self):
        if not self.peek():
            raise ParseError("empty expression", position=0, expected="expression")
        value = self.expr()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", position=self.pos,
                             expected="operator or end of input")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-") and self.peek():
            op = self.peek()
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            ch = self.peek()
            if ch in ("*", "/") and ch:
                self.pos += 1
                rhs = self.unary()
                if ch == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by zero", position=self.pos)
                    value = value / rhs
            elif ch and (ch.isdigit() or ch in "z("):
                value = value * self.power()
            else:
                return value

    def unary(self):
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.unary()
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            sign = 1
            if self.peek() == "-":
                self.pos += 1
                sign = -1
            elif self.peek() == "(":
                self.pos += 1
                if self.peek() == "-":
                    self.pos += 1
                    sign = -1
                k = self.integer()
                self.take(")")
                return self._raise(base, sign * k)
            k = self.integer()
            return self._raise(base, sign * k)
        return base

    def _raise(self, base, k):
        if k < 0 and base.is_zero():
            raise ParseError("negative power of zero", position=self.pos)
        return base ** k

    def integer(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("unexpected " + (repr(self.peek()) if self.peek() else "end of input"),
                             position=start, expected="integer")
        return int(self.text[start:self.pos])

    def atom(self):
        ch = self.peek()
        if ch == "z":
            self.pos += 1
            return RationalFunction.z()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            self.take(")")
            return value
        if ch.isdigit():
            return RationalFunction.constant(self.integer())
        raise ParseError("unexpected " + (repr(ch) if ch else "end of input"),
                         position=self.pos, expected="number, 'z' or '('")


def parse_rational_function(text):
    return _Parser(text).parse()


def parse_rational(text):
    """A rational constant written as an expression ("3/4", "-2")."""
    f = parse_rational_function(text)
    if not f.is_constant():
        raise ParseError(f"expected a rational constant, got {text!r}", position=0)
    return f.constant_value()


def _format_coefficient(c):
    return str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(coefficients):
    """Polynomial in z, highest degree first, explicit '*' and '^'."""
    terms = []
    for k in range(len(coefficients) - 1, -1, -1):
        c = Fraction(coefficients[k])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = _format_coefficient(a)
        else:
            mono = "z" if k == 1 else f"z^{k}"
            body = mono if a == 1 else f"{_format_coefficient(a)}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def format_rational_function(f):
    num = format_polynomial(f.num.coefficients)
    if f.is_polynomial():
        return num
    den = format_polynomial(f.den.coefficients)
    if f.num.degree > 0 and len([c for c in f.num.coefficients if c != 0]) > 1:
        num = f"({num})"
    elif "/" in num:
        num = f"({num})"
    if f.den.degree >= 1 and len([c for c in f.den.coefficients if c != 0]) == 1:
        return f"{num}/{den}"
    return f"{num}/({den})"
