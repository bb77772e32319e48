"""Exact linear algebra over Q on small constant matrices."""

from fractions import Fraction
from math import gcd, lcm

from flint import fmpq_mat, fmpq_poly

from ..errors import NonRationalSpectrum, NotSquare
from .matrix import RatMatrix, as_constant_rows
from .poly import Polynomial, to_fmpq, to_fraction


def _integer_row(row):
    m = 1
    for x in row:
        m = lcm(m, x.denominator)
    ints = [int(x * m) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _primitive(row):
    g = 0
    for v in row:
        g = gcd(g, v)
    if g > 1:
        return [v // g for v in row]
    return row


def rref(rows, ncols=None):
    """Reduced row echelon form of a rational matrix.

    Forward elimination is fraction-free on integer rows (each row kept
    primitive); the final normalization divides by pivots.
    Returns (list of nonzero Fraction rows, pivot columns).
    """
    rows = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [_integer_row(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        p = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                if p is None or abs(work[i][c]) < abs(work[p][c]):
                    p = i
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        pr = work[r]
        a = pr[c]
        for i in range(len(work)):
            if i == r or work[i][c] == 0:
                continue
            b = work[i][c]
            work[i] = _primitive([a * x - b * y for x, y in zip(work[i], pr)])
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    out = []
    for i, c in enumerate(pivots):
        a = work[i][c]
        out.append([Fraction(x, a) for x in work[i]])
    return out, pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def solve_kernel(A):
    """Basis of {x : A x = 0}; each vector has a 1 at its free coordinate."""
    rows = as_constant_rows(A)
    ncols = len(rows[0])
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(tuple(v))
    return basis


def canonical_basis(vectors, dim=None):
    """Canonical basis of the span: the nonzero rows of its RREF."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    red, _ = rref(vectors, dim if dim is not None else len(vectors[0]))
    return [tuple(r) for r in red]


def normalize_vector(v):
    for x in v:
        if x != 0:
            return tuple(Fraction(y) / x for y in v)
    raise ValueError("zero vector")


def in_span(v, basis):
    if not basis:
        return all(x == 0 for x in v)
    return rank(list(basis) + [tuple(v)]) == rank(list(basis))


def matmul(a, b):
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
                       for j in range(len(b[0]))) for i in range(len(a)))


def matvec(a, v):
    return tuple(sum((a[i][k] * v[k] for k in range(len(v))), Fraction(0)) for i in range(len(a)))


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def inverse(a):
    n = len(a)
    aug = [list(a[i]) + list(identity(n)[i]) for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(red[i][n:]) for i in range(n))


def char_poly(M):
    """det(x Id - M) as a monic Polynomial."""
    if isinstance(M, RatMatrix) and not M.is_square:
        raise NotSquare("characteristic polynomial of a non-square matrix")
    a = as_constant_rows(M)
    n = len(a)
    if any(len(r) != n for r in a):
        raise NotSquare("characteristic polynomial of a non-square matrix")
    mat = fmpq_mat(n, n, [to_fmpq(x) for row in a for x in row])
    return Polynomial(mat.charpoly())


def rational_roots(p):
    """Rational roots of a Polynomial with multiplicity, ascending; each certified by evaluation."""
    fp = p.flint if isinstance(p, Polynomial) else fmpq_poly([to_fmpq(Fraction(c)) for c in p])
    found = []
    for r, m in fp.roots():
        root = to_fraction(r)
        q = fp
        lin = fmpq_poly([-r, 1])
        for _ in range(m):
            q, rem = divmod(q, lin)
            if not rem.is_zero():
                raise AssertionError("root certification failed")
        found.extend([root] * m)
    return sorted(found)


def eigenspace(a, lam):
    """Canonical (RREF) basis of ker(a - lam Id); vectors have first nonzero entry 1."""
    n = len(a)
    shifted = [[a[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    return canonical_basis(solve_kernel(shifted), n)


class Spectrum:
    """Sorted eigenvalue multiset; eigenspace bases are computed on demand."""

    def __init__(self, matrix, eigenvalues):
        self._matrix = matrix
        self.eigenvalues = tuple(eigenvalues)
        self._spaces = {}

    @property
    def distinct(self):
        return tuple(sorted(set(self.eigenvalues)))

    def eigenvectors(self, lam):
        lam = Fraction(lam)
        if lam not in self._spaces:
            self._spaces[lam] = tuple(eigenspace(self._matrix, lam)) if lam in self.eigenvalues else ()
        return self._spaces[lam]

    @property
    def eigenspaces(self):
        return {lam: self.eigenvectors(lam) for lam in self.distinct}

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.eigenvalues == other.eigenvalues

    def __repr__(self):
        return f"Spectrum({list(map(str, self.eigenvalues))})"


def rational_spectrum(M):
    """Eigenvalues (sorted multiset) and eigenspace bases of a constant matrix.

    Raises NonRationalSpectrum when the characteristic polynomial does not split over Q.
    """
    a = as_constant_rows(M)
    cp = char_poly(a)
    roots = rational_roots(cp)
    if len(roots) != len(a):
        raise NonRationalSpectrum(f"characteristic polynomial {cp.coefficients} does not split over Q")
    return Spectrum(a, roots)
