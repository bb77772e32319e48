"""Dense matrices over Q(z)."""

from fractions import Fraction

from ..errors import NotConstant, NotSquare
from .ratfunc import RationalFunction, as_ratfunc

_ZERO = RationalFunction(0)
_ONE = RationalFunction(1)


def _size(f):
    return f.num.degree + f.den.degree


class RatMatrix:
    __slots__ = ("rows", "cols", "entries", "_hash", "_const")

    def __init__(self, entries):
        grid = tuple(tuple(as_ratfunc(x) for x in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ValueError("ragged matrix")
        self.rows = len(grid)
        self.cols = width
        self.entries = grid
        self._hash = None
        self._const = None

    @classmethod
    def _raw(cls, grid):
        obj = cls.__new__(cls)
        obj.entries = grid
        obj.rows = len(grid)
        obj.cols = len(grid[0])
        obj._hash = None
        obj._const = None
        return obj

    @classmethod
    def identity(cls, n):
        return cls._raw(tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls._raw(tuple(tuple(_ZERO for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def diagonal(cls, values):
        values = [as_ratfunc(v) for v in values]
        n = len(values)
        return cls._raw(tuple(tuple(values[i] if i == j else _ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, n, f):
        return cls.diagonal([f] * n)

    @classmethod
    def column(cls, values):
        return cls([[v] for v in values])

    def __getitem__(self, index):
        if isinstance(index, tuple):
            i, j = index
            return self.entries[i][j]
        return self.entries[index]

    def __iter__(self):
        return iter(self.entries)

    @property
    def is_square(self):
        return self.rows == self.cols

    def is_zero(self):
        return all(x.is_zero() for row in self.entries for x in row)

    def is_constant(self):
        return all(x.is_constant() for row in self.entries for x in row)

    def constant_rows(self):
        """Entries as a tuple of tuples of Fraction; NotConstant otherwise."""
        if self._const is None:
            if not self.is_constant():
                raise NotConstant("matrix has non-constant entries")
            self._const = tuple(tuple(x.constant_value() for x in row) for row in self.entries)
        return self._const

    def map(self, fn):
        return RatMatrix._raw(tuple(tuple(fn(x) for x in row) for row in self.entries))

    def transpose(self):
        return RatMatrix._raw(tuple(tuple(self.entries[i][j] for i in range(self.rows))
                                    for j in range(self.cols)))

    T = property(transpose)

    def derivative(self):
        return self.map(lambda x: x.derivative())

    def substitute_inverse(self):
        return self.map(lambda x: x.substitute_inverse())

    def column_vector(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def __add__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return RatMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return RatMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)))

    def __neg__(self):
        return self.map(lambda x: -x)

    def _check_same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __matmul__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        out = []
        ocols = other.cols
        oent = other.entries
        for row in self.entries:
            acc = [_ZERO] * ocols
            for k, a in enumerate(row):
                if a.is_zero():
                    continue
                brow = oent[k]
                for j in range(ocols):
                    b = brow[j]
                    if not b.is_zero():
                        acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return RatMatrix._raw(tuple(out))

    def __mul__(self, scalar):
        if isinstance(scalar, RatMatrix):
            return self @ scalar
        s = as_ratfunc(scalar)
        return self.map(lambda x: x * s)

    __rmul__ = __mul__

    def trace(self):
        if not self.is_square:
            raise NotSquare("trace of a non-square matrix")
        total = _ZERO
        for i in range(self.rows):
            total = total + self.entries[i][i]
        return total

    def _elimination(self, augment):
        """Gauss-Jordan on a copy; returns (reduced, det, right block)."""
        n = self.rows
        a = [list(row) for row in self.entries]
        b = [list(row) for row in augment] if augment is not None else None
        det = _ONE
        for c in range(n):
            pivot = None
            for r in range(c, n):
                if not a[r][c].is_zero():
                    if pivot is None or _size(a[r][c]) < _size(a[pivot][c]):
                        pivot = r
            if pivot is None:
                return None, _ZERO, None
            if pivot != c:
                a[c], a[pivot] = a[pivot], a[c]
                if b is not None:
                    b[c], b[pivot] = b[pivot], b[c]
                det = -det
            pv = a[c][c]
            det = det * pv
            inv = pv.inverse()
            a[c] = [x * inv for x in a[c]]
            if b is not None:
                b[c] = [x * inv for x in b[c]]
            rng = range(n) if b is not None else range(c + 1, n)
            for r in rng:
                if r == c:
                    continue
                f = a[r][c]
                if f.is_zero():
                    continue
                a[r] = [x - f * y if not y.is_zero() else x for x, y in zip(a[r], a[c])]
                if b is not None:
                    b[r] = [x - f * y if not y.is_zero() else x for x, y in zip(b[r], b[c])]
        return a, det, b

    def det(self):
        if not self.is_square:
            raise NotSquare("determinant of a non-square matrix")
        if self.rows == 1:
            return self.entries[0][0]
        if self.rows == 2:
            (a, b), (c, d) = self.entries
            return a * d - b * c
        _, det, _ = self._elimination(None)
        return det

    def inverse(self):
        if not self.is_square:
            raise NotSquare("inverse of a non-square matrix")
        n = self.rows
        if n == 1:
            return RatMatrix._raw(((self.entries[0][0].inverse(),),))
        ident = RatMatrix.identity(n).entries
        _, det, b = self._elimination(ident)
        if b is None:
            raise ZeroDivisionError("singular matrix")
        return RatMatrix._raw(tuple(tuple(row) for row in b))

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        return "RatMatrix([" + ", ".join("[" + ", ".join(str(x) for x in row) + "]"
                                          for row in self.entries) + "])"


def constant_matrix(rows):
    return RatMatrix._raw(tuple(tuple(RationalFunction.constant(Fraction(x)) for x in row) for row in rows))


def as_constant_rows(M):
    """Accept a RatMatrix or a grid of numbers; return tuple-of-tuples of Fraction."""
    if isinstance(M, RatMatrix):
        return M.constant_rows()
    return tuple(tuple(Fraction(x) for x in row) for row in M)


def matrix_rank(rows):
    """Rank over Q(z) of a list of rows of rational functions."""
    work = [[as_ratfunc(x) for x in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if not work[i][c].is_zero()), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = work[r][c].inverse()
        for i in range(r + 1, len(work)):
            f = work[i][c]
            if f.is_zero():
                continue
            f = f * inv
            work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return r
