"""
Exact linear algebra over Q and Z on top of sympy's DomainMatrix.

Vectors are plain tuples of Fractions (or ints). A RationalSpan keeps the
reduced row echelon basis of a subspace so that membership and reduction
queries do not need a new elimination.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

from fractions import Fraction

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as _smith_invariants

from ..errors import InvalidArgumentError


def _to_fraction(x):
    return Fraction(int(x.numerator), int(x.denominator))


def _rational_matrix(rows, width):
    data = [[QQ(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in rows]
    return DomainMatrix(data, (len(rows), width), QQ)


def _integer_matrix(rows, width):
    data = [[ZZ(int(v)) for v in row] for row in rows]
    return DomainMatrix(data, (len(rows), width), ZZ)


def row_echelon_basis(vectors, width):
    """Returns (rows, pivots): the nonzero rows of the rref and their pivot columns."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return [], ()
    reduced, pivots = _rational_matrix(vectors, width).rref()
    rows = [tuple(_to_fraction(x) for x in row) for row in reduced.to_list()[:len(pivots)]]
    return rows, tuple(pivots)


def rational_rank(vectors, width):
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return 0
    return _rational_matrix(vectors, width).rank()


def invariant_factors(rows, width):
    """Nonzero Smith invariant factors of the integer lattice spanned by rows."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return ()
    factors = _smith_invariants(_integer_matrix(rows, width))
    return tuple(sorted(abs(int(f)) for f in factors if f))


def integer_rank(rows, width):
    return len(invariant_factors(rows, width))


def inverse_matrix(rows):
    """Inverse of a square rational matrix given as rows."""
    size = len(rows)
    inverse = _rational_matrix(rows, size).inv()
    return [tuple(_to_fraction(x) for x in row) for row in inverse.to_list()]


class RationalSpan:
    """
    Subspace of Q^width held as a reduced row echelon basis.
    """

    def __init__(self, width, vectors=()):
        self.width = width
        self.rows = []
        self.pivots = ()
        if vectors:
            self.extend(vectors)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def basis(self):
        return list(self.rows)

    def copy(self):
        other = RationalSpan(self.width)
        other.rows = list(self.rows)
        other.pivots = self.pivots
        return other

    def reduce(self, vector):
        """vector minus its component along the pivots; zero iff vector is in the span."""
        if len(vector) != self.width:
            raise InvalidArgumentError("Vector width {} differs from span width {}".format(len(vector), self.width))
        result = [Fraction(v) for v in vector]
        for row, pivot in zip(self.rows, self.pivots):
            factor = result[pivot]
            if factor:
                for i, value in enumerate(row):
                    if value:
                        result[i] -= factor * value
        return tuple(result)

    def contains(self, vector):
        return not any(self.reduce(vector))

    def extend(self, vectors):
        """Adds vectors to the span; returns True if the dimension grew."""
        fresh = [v for v in vectors if any(v) and not self.contains(v)]
        if not fresh:
            return False
        self.rows, self.pivots = row_echelon_basis(self.rows + fresh, self.width)
        return True

    def coordinates(self, vector):
        """Coefficients of an in-span vector with respect to the echelon rows."""
        if not self.contains(vector):
            raise InvalidArgumentError("Vector is not in the span")
        return tuple(Fraction(vector[p]) for p in self.pivots)


class QuotientCoordinates:
    """
    Linear coordinates on outer / inner for nested spans inner <= outer.

    phi(v) reduces v modulo inner and reads the result against an echelon basis
    of the reduced outer basis, giving a vector in Q^(outer.dim - inner.dim).
    """

    def __init__(self, outer, inner):
        self.inner = inner
        self.outer = outer
        reduced = [inner.reduce(row) for row in outer.rows]
        self.quotient = RationalSpan(outer.width, reduced)
        if self.quotient.dim != outer.dim - inner.dim:
            raise InvalidArgumentError("Inner span is not contained in the outer span")

    @property
    def rank(self):
        return self.quotient.dim

    def __call__(self, vector):
        if not self.outer.contains(vector):
            raise InvalidArgumentError("Vector lies outside the outer span")
        return self.quotient.coordinates(self.inner.reduce(vector))


__all__ = [
    "RationalSpan",
    "QuotientCoordinates",
    "row_echelon_basis",
    "rational_rank",
    "integer_rank",
    "invariant_factors",
    "inverse_matrix",
]
