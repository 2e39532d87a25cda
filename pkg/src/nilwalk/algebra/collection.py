"""
Collection Module

Hall basic commutators and normal forms in the free nilpotent group N(k, l).

Every element of N(k, l) is written uniquely as c_1^x_1 ... c_t^x_t over the
Hall basis (length first, then the commutator order). Words are brought to
this form by the collecting process: the least uncollected basic commutator
c_a is found and each of its occurrences is moved to the left one letter at a
time with x y = y x [x, y]. The inserted [x, y] only involves basic
commutators longer than x, so brackets of length > l never appear.

The commutation relations [c_b^e, c_a^f] are read from the Magnus image
s_i -> 1 + X_i of N(k, l) in the integer power series ring truncated above
degree l. The same image gives logarithms for the Lie layer and an
independent normal form (normal_form_of_series): the degree-m part of a series
is a combination of the basic Lie polynomials of length m, whose coefficients
are the exponents of the length-m basic commutators.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import divisors, mobius
from sympy.ntheory.multinomial import multinomial_coefficients

from .._utils import generalized_binomial
from ..errors import InvalidArgumentError, NotInSpanError
from .commutators import Word, bracket, canonical_form, group_word, leaf
from .linalg import inverse_matrix, row_echelon_basis
from .weights import effective_alpha

logger = logging.getLogger(__name__)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Witt Numbers
@functools.lru_cache(maxsize=None)
def witt_number(k, m):
    """M_k(m) = (1/m) sum_{d | m} mu(d) k^(m/d): basic commutators of length m."""
    if k < 1 or m < 1:
        raise InvalidArgumentError("witt_number needs k >= 1 and m >= 1")
    return sum(int(mobius(d)) * k ** (m // d) for d in divisors(m)) // m


@functools.lru_cache(maxsize=None)
def hirsch_length(k, l):
    """Number of Hall basic commutators of length <= l."""
    return sum(witt_number(k, m) for m in range(1, l + 1))


def free_nilpotent_dimension(k, l):
    """D(N(k, l)) = sum_m m * M_k(m), the volume growth exponent."""
    return sum(m * witt_number(k, m) for m in range(1, l + 1))


def multigraded_witt_number(multidegree):
    """Number of basic commutators containing exactly multidegree[i] copies of s_(i+1)."""
    m = sum(multidegree)
    if m == 0:
        return 0
    k = len(multidegree)
    total = 0
    for d in divisors(math.gcd(*multidegree)):
        reduced = tuple(part // d for part in multidegree)
        total += int(mobius(d)) * multinomial_coefficients(k, m // d)[reduced]
    return total // m


def predicted_free_nilpotent_exponent(k, l, a):
    """
    D(S, w) for N(k, l) with its standard generators and w_i = 1/min(alpha_i, 2).

    Every basic commutator is free at its own weight, so D is the sum of the
    weights of the Hall basis, grouped by multidegree.
    """
    if len(a) != k:
        raise InvalidArgumentError("Need one exponent per generator: {} given for k={}".format(len(a), k))
    weights = [1 / effective_alpha(alpha) for alpha in a]
    total = Fraction(0)
    for m in range(1, l + 1):
        for multidegree in multinomial_coefficients(k, m):
            count = multigraded_witt_number(multidegree)
            if count:
                total += count * sum(part * w for part, w in zip(multidegree, weights))
    return total


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Truncated Magnus Series
class TruncatedSeries:
    """
    Non-commutative power series in X_1..X_k truncated above degree `depth`.

    Coefficients live in one dict per degree, keyed by words (tuples of
    generator indices).
    """

    __slots__ = ("k", "depth", "parts")

    def __init__(self, k, depth, parts=None):
        self.k = k
        self.depth = depth
        if parts is None:
            parts = [dict() for _ in range(depth + 1)]
        self.parts = parts

    @classmethod
    def one(cls, k, depth):
        series = cls(k, depth)
        series.parts[0][()] = 1
        return series

    @classmethod
    def generator(cls, k, depth, index, sign=1):
        """Image of s_index^sign: 1 + X, or the geometric series for the inverse."""
        x = cls(k, depth)
        if depth >= 1:
            x.parts[1][(index,)] = 1
        return x.unipotent_power(sign)

    def copy(self):
        return TruncatedSeries(self.k, self.depth, [dict(part) for part in self.parts])

    def _check(self, other):
        if self.k != other.k or self.depth != other.depth:
            raise InvalidArgumentError("Series over different truncated algebras")

    def __add__(self, other):
        self._check(other)
        result = self.copy()
        for degree, part in enumerate(other.parts):
            target = result.parts[degree]
            for word, value in part.items():
                total = target.get(word, 0) + value
                if total:
                    target[word] = total
                else:
                    target.pop(word, None)
        return result

    def scale(self, factor):
        return TruncatedSeries(self.k, self.depth, [
            {word: value * factor for word, value in part.items()} for part in self.parts
        ])

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        self._check(other)
        result = TruncatedSeries(self.k, self.depth)
        for da, left in enumerate(self.parts):
            if not left:
                continue
            for db in range(self.depth - da + 1):
                right = other.parts[db]
                if not right:
                    continue
                target = result.parts[da + db]
                for wa, va in left.items():
                    for wb, vb in right.items():
                        word = wa + wb
                        total = target.get(word, 0) + va * vb
                        if total:
                            target[word] = total
                        else:
                            target.pop(word, None)
        return result

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.k == other.k and self.depth == other.depth \
            and self.parts == other.parts

    def constant(self):
        return self.parts[0].get((), 0)

    def augmentation(self):
        """The series minus its constant term."""
        result = self.copy()
        result.parts[0] = {}
        return result

    def unipotent_power(self, n):
        """(1 + A)^n for A without constant term, n any integer."""
        a = self.augmentation()
        result = TruncatedSeries.one(self.k, self.depth)
        term = TruncatedSeries.one(self.k, self.depth)
        for p in range(1, self.depth + 1):
            term = term * a
            if not any(term.parts):
                break
            coefficient = generalized_binomial(n, p)
            if coefficient:
                result = result + term.scale(coefficient)
        return result

    def power(self, n):
        if self.constant() != 1:
            raise InvalidArgumentError("Only unipotent series (constant term 1) have integer powers here")
        return (self - TruncatedSeries.one(self.k, self.depth)).unipotent_power(n)

    def inverse(self):
        return self.power(-1)

    def log(self):
        """log(1 + A) = A - A^2/2 + ..., exact rationals."""
        if self.constant() != 1:
            raise InvalidArgumentError("Logarithm needs constant term 1")
        a = self.augmentation()
        result = TruncatedSeries(self.k, self.depth)
        term = TruncatedSeries.one(self.k, self.depth)
        for p in range(1, self.depth + 1):
            term = term * a
            if not any(term.parts):
                break
            result = result + term.scale(Fraction((-1) ** (p + 1), p))
        return result

    def lie_bracket(self, other):
        return self * other - other * self

    def vector(self, degrees=None):
        """Coefficients over all words of the given degrees (default 1..depth), lexicographic."""
        degrees = range(1, self.depth + 1) if degrees is None else degrees
        return tuple(
            self.parts[m].get(word, 0)
            for m in degrees
            for word in itertools.product(range(1, self.k + 1), repeat=m)
        )

    @classmethod
    def from_vector(cls, k, depth, values, degrees=None):
        degrees = range(1, depth + 1) if degrees is None else degrees
        series = cls(k, depth)
        values = iter(values)
        for m in degrees:
            for word in itertools.product(range(1, k + 1), repeat=m):
                value = next(values)
                if value:
                    series.parts[m][word] = value
        return series


def series_of_commutator(c, k, depth):
    """Magnus image of the group element denoted by the formal commutator c."""
    if c.is_leaf:
        return TruncatedSeries.generator(k, depth, c.letter.index, c.letter.sign)
    a = series_of_commutator(c.left, k, depth)
    b = series_of_commutator(c.right, k, depth)
    return a.inverse() * b.inverse() * a * b


def lie_polynomial(c, k, depth):
    """Homogeneous Lie polynomial of c: X_i for s_i and [L(a), L(b)] for [a, b]."""
    if c.is_leaf:
        series = TruncatedSeries(k, depth)
        series.parts[1][(c.letter.index,)] = c.letter.sign
        return series
    return lie_polynomial(c.left, k, depth).lie_bracket(lie_polynomial(c.right, k, depth))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Hall Basis
@dataclass(frozen=True)
class HallBasis:
    """
    Basic commutators c_1 < ... < c_t of N(k, l).

    Attributes:
        k (int): Number of generators.
        l (int): Nilpotency class.
        commutators (tuple): Basic commutators, length first then commutator order.
        counts (tuple): Number of basic commutators of each length 1..l.
    """

    k: int
    l: int
    commutators: tuple
    counts: tuple

    def __len__(self):
        return len(self.commutators)

    def __iter__(self):
        return iter(self.commutators)

    def index(self, c):
        return self.commutators.index(c)

    def of_length(self, m):
        return [c for c in self.commutators if c.length == m]

    def to_json(self):
        return [str(c) for c in self.commutators]


def _basic_of_length(k, length, by_length):
    if length == 1:
        return [leaf(i) for i in range(1, k + 1)]
    found = []
    for left_length in range(1, length):
        for left in by_length[left_length]:
            for right in by_length[length - left_length]:
                if not left > right:
                    continue
                if not left.is_leaf and right < left.right:
                    continue
                found.append(bracket(left, right))
    return sorted(found)


@functools.lru_cache(maxsize=None)
def hall_basis(k, l):
    """Hall basis of N(k, l); per-length counts are the Witt numbers."""
    if k < 1 or l < 1:
        raise InvalidArgumentError("hall_basis needs k >= 1 and l >= 1, got k={}, l={}".format(k, l))
    by_length = {}
    for length in range(1, l + 1):
        by_length[length] = _basic_of_length(k, length, by_length)
    commutators = tuple(c for length in range(1, l + 1) for c in by_length[length])
    counts = tuple(len(by_length[length]) for length in range(1, l + 1))
    logger.debug("Hall basis k=%d l=%d: counts %s", k, l, counts)
    return HallBasis(k, l, commutators, counts)


class _LengthSolver:
    """Solves v = sum_c x_c L(c) for the basic commutators c of one length."""

    def __init__(self, k, l, m, commutators):
        self.m = m
        self.rows = [lie_polynomial(c, k, l).vector([m]) for c in commutators]
        width = k ** m
        _, pivots = row_echelon_basis(self.rows, width)
        if len(pivots) != len(commutators):
            raise InvalidArgumentError("Basic Lie polynomials of length {} are dependent".format(m))
        self.pivots = pivots
        self.inverse = inverse_matrix([[row[p] for p in pivots] for row in self.rows])

    def solve(self, vector):
        picked = [vector[p] for p in self.pivots]
        size = len(self.pivots)
        x = [sum(picked[i] * self.inverse[i][j] for i in range(size)) for j in range(size)]
        for j, value in enumerate(x):
            if Fraction(value).denominator != 1:
                raise NotInSpanError("Non-integral exponent {} at length {}".format(value, self.m))
            x[j] = int(value)
        for position in range(len(vector)):
            if sum(x[j] * self.rows[j][position] for j in range(size)) != vector[position]:
                raise NotInSpanError("Degree-{} part is not a Lie element".format(self.m))
        return x


@functools.lru_cache(maxsize=None)
def _collector(k, l):
    basis = hall_basis(k, l)
    solvers = {m: _LengthSolver(k, l, m, basis.of_length(m)) for m in range(1, l + 1)}
    images = tuple(series_of_commutator(c, k, l) for c in basis.commutators)
    return basis, solvers, images


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Normal Forms
@dataclass(frozen=True)
class NormalForm:
    """Exponent vector (x_1, ..., x_t) over hall_basis(k, l)."""

    k: int
    l: int
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(x) for x in self.exponents))
        if len(self.exponents) != hirsch_length(self.k, self.l):
            raise InvalidArgumentError("Normal form of N({},{}) needs {} exponents, got {}".format(
                self.k, self.l, hirsch_length(self.k, self.l), len(self.exponents)))

    @classmethod
    def identity(cls, k, l):
        return cls(k, l, (0,) * hirsch_length(k, l))

    def is_identity(self):
        return not any(self.exponents)

    def word(self):
        """c_1^x_1 ... c_t^x_t as a Word over the Hall basis."""
        return Word(zip(hall_basis(self.k, self.l).commutators, self.exponents))

    def to_json(self):
        return list(self.exponents)


def magnus_image(nf):
    """Magnus series of c_1^x_1 ... c_t^x_t."""
    _, _, images = _collector(nf.k, nf.l)
    result = TruncatedSeries.one(nf.k, nf.l)
    for image, x in zip(images, nf.exponents):
        if x:
            result = result * image.power(x)
    return result


def normal_form_of_series(series):
    """Reads the Hall exponents of a Magnus series, lowest length first."""
    k, l = series.k, series.depth
    basis, solvers, images = _collector(k, l)
    if series.constant() != 1:
        raise NotInSpanError("Series with constant term {} is not a group element".format(series.constant()))
    remainder = series
    exponents = []
    position = 0
    for m in range(1, l + 1):
        size = basis.counts[m - 1]
        x = solvers[m].solve(remainder.vector([m]))
        peel = TruncatedSeries.one(k, l)
        for offset, value in enumerate(x):
            if value:
                peel = peel * images[position + offset].power(value)
        remainder = peel.inverse() * remainder
        exponents.extend(x)
        position += size
    if remainder != TruncatedSeries.one(k, l):
        raise NotInSpanError("Collection left a nontrivial remainder")
    return NormalForm(k, l, tuple(exponents))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Collecting Process
@functools.lru_cache(maxsize=65536)
def _commutation(k, l, b, e, a, f):
    """Hall exponents of [c_b^e, c_a^f]; nonzero only past position b."""
    _, _, images = _collector(k, l)
    x = images[b].power(e)
    y = images[a].power(f)
    return normal_form_of_series(x.inverse() * y.inverse() * x * y).exponents


def _letters(word, k, l):
    """(position in the Hall basis, exponent) letters of a word over formal commutators."""
    position = {c: i for i, c in enumerate(hall_basis(k, l).commutators)}
    letters = []
    for c, exponent in word:
        if c.max_index() > k:
            raise InvalidArgumentError("Commutator {} uses a letter outside 1..{}".format(c, k))
        if c.length > l:
            continue
        representative, sign = canonical_form(c)
        if representative in position:
            letters.append((position[representative], sign * exponent))
            continue
        expansion = [(letter.index - 1, letter.sign) for letter in group_word(c)]
        if exponent < 0:
            expansion = [(i, -s) for i, s in reversed(expansion)]
        letters.extend(expansion * abs(exponent))
    return letters


def _collect_letters(letters, k, l):
    """
    Collecting process on (position, exponent) letters: always the least
    uncollected basic commutator first, moved left by successive commutation.
    """
    exponents = [0] * hirsch_length(k, l)
    word = [letter for letter in letters if letter[1]]
    swaps = 0
    for a in range(len(exponents)):
        while True:
            p = next((i for i, (b, _) in enumerate(word) if b == a), None)
            if p is None:
                break
            f = word[p][1]
            while p > 0:
                b, e = word[p - 1]
                relation = [(i, x) for i, x in enumerate(_commutation(k, l, b, e, a, f)) if x]
                word[p - 1:p + 1] = [(a, f), (b, e)] + relation
                p -= 1
                swaps += 1
            exponents[a] += f
            del word[0]
    logger.debug("Collected %d letters in N(%d,%d) with %d swaps", len(letters), k, l, swaps)
    return tuple(exponents)


def collect(word, k, l):
    """
    Normal form of a word over formal commutators in N(k, l).

    Basic commutators (and their inverses under J) enter as single letters;
    any other commutator is expanded into its group word first. Brackets
    longer than l are trivial in N(k, l) and dropped.
    """
    return NormalForm(k, l, _collect_letters(_letters(word, k, l), k, l))


def _same_basis(u, v):
    if (u.k, u.l) != (v.k, v.l):
        raise InvalidArgumentError("Normal forms over different bases: N({},{}) vs N({},{})".format(u.k, u.l, v.k, v.l))


def _normal_letters(u):
    return [(i, x) for i, x in enumerate(u.exponents) if x]


def nf_multiply(u, v):
    """Concatenates the two collected words and collects the result."""
    _same_basis(u, v)
    return NormalForm(u.k, u.l, _collect_letters(_normal_letters(u) + _normal_letters(v), u.k, u.l))


def nf_inverse(u):
    letters = [(i, -x) for i, x in reversed(_normal_letters(u))]
    return NormalForm(u.k, u.l, _collect_letters(letters, u.k, u.l))


def nf_power(u, n):
    """u^n by repeated squaring."""
    if n < 0:
        return nf_power(nf_inverse(u), -n)
    result = NormalForm.identity(u.k, u.l)
    square = u
    while n:
        if n & 1:
            result = nf_multiply(result, square)
        n >>= 1
        if n:
            square = nf_multiply(square, square)
    return result


__all__ = [
    "witt_number",
    "hirsch_length",
    "free_nilpotent_dimension",
    "multigraded_witt_number",
    "predicted_free_nilpotent_exponent",
    "TruncatedSeries",
    "series_of_commutator",
    "lie_polynomial",
    "HallBasis",
    "hall_basis",
    "NormalForm",
    "magnus_image",
    "normal_form_of_series",
    "collect",
    "nf_multiply",
    "nf_inverse",
    "nf_power",
]
