"""
Weights Module

Weight vectors, weight systems and weight-function systems.

A weight system assigns to every generator s_i a vector w_i whose first
coordinate is positive; it extends additively to formal commutators. Vectors
are compared lexicographically. The matching weight functions are the
power-times-log family F(r) = r^{v1} (log(e + r))^{v2}, one per generator, with
F_[c1,c2] = F_c1 F_c2. For this family the compatibility requirement between
a weight system and its functions reduces to using (v1, v2) = w_i.

Everything order-sensitive is exact (fractions.Fraction). Floats only appear
when a weight function is evaluated at a point where no exact value exists.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import optimize
from sympy import integer_nthroot

from .._utils import format_rational, parse_rational
from ..errors import InvalidArgumentError


INVERSION_RTOL = 2.0 ** -40


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Weight Vector
@dataclass(frozen=True, order=True)
class WeightVec:
    """
    Exact weight vector, ordered lexicographically.

    Attributes:
        coords (tuple): Fractions; the first one is positive.
    """

    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not coords:
            raise InvalidArgumentError("A weight vector needs at least one coordinate")
        if coords[0] <= 0:
            raise InvalidArgumentError("The first weight coordinate must be positive, got " + str(coords[0]))
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords):
        return cls(tuple(coords))

    @property
    def dimension(self):
        return len(self.coords)

    def __add__(self, other):
        if self.dimension != other.dimension:
            raise InvalidArgumentError("Weight dimensions differ: {} vs {}".format(self.dimension, other.dimension))
        return WeightVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __getitem__(self, index):
        return self.coords[index]

    def __str__(self):
        if self.dimension == 1:
            return format_rational(self.coords[0])
        return "(" + ",".join(format_rational(c) for c in self.coords) + ")"


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Weight System
@dataclass(frozen=True)
class WeightSystem:
    """Per-generator weight vectors (w_1, ..., w_k) of a common dimension."""

    weights: tuple

    def __post_init__(self):
        weights = tuple(w if isinstance(w, WeightVec) else WeightVec(tuple(w)) for w in self.weights)
        if not weights:
            raise InvalidArgumentError("A weight system needs at least one generator weight")
        if len({w.dimension for w in weights}) != 1:
            raise InvalidArgumentError("All generator weights must share one dimension")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def scalar(cls, values):
        return cls(tuple(WeightVec.of(parse_rational(v)) for v in values))

    @property
    def k(self):
        return len(self.weights)

    @property
    def dimension(self):
        return self.weights[0].dimension

    def __getitem__(self, index):
        return self.weights[index]

    def project(self, dimension):
        """Keeps the first coordinates only."""
        return WeightSystem(tuple(WeightVec(w.coords[:dimension]) for w in self.weights))


def weight_of(c, system):
    """w(c): sum of the leaf weights (signs do not matter)."""
    total = None
    for letter in c.leaves():
        if letter.index > system.k:
            raise InvalidArgumentError("Letter {} outside a weight system of {} generators".format(letter, system.k))
        w = system[letter.index - 1]
        total = w if total is None else total + w
    return total


def weight_value_sequence(system, max_len):
    """
    Strictly increasing list of all weights realized by formal commutators of
    length <= max_len.

    Every multiset of at most max_len generator indices is the leaf multiset of
    some formal commutator, so the values are exactly the multiset sums.
    """
    if max_len < 1:
        raise InvalidArgumentError("max_len must be >= 1, got " + str(max_len))
    layer = set(system.weights)
    values = set(layer)
    for _ in range(max_len - 1):
        layer = {value + w for value in layer for w in system.weights}
        values |= layer
    return sorted(values)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Weight Function
def _exact_power(r, exponent):
    """r^exponent as a Fraction when it is rational, else None."""
    r = Fraction(r)
    exponent = Fraction(exponent)
    p, q = exponent.numerator, exponent.denominator
    if p < 0:
        r, p = 1 / r, -p
    num, num_exact = integer_nthroot(r.numerator ** p, q)
    den, den_exact = integer_nthroot(r.denominator ** p, q)
    if num_exact and den_exact:
        return Fraction(int(num), int(den))
    return None


@dataclass(frozen=True, order=True)
class WeightFunction:
    """
    F(r) = r^v1 * log(e + r)^v2 on [1, inf).

    Ordering is lexicographic on (v1, v2), which is the eventual pointwise
    order of the functions.
    """

    v1: Fraction
    v2: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "v1", Fraction(self.v1))
        object.__setattr__(self, "v2", Fraction(self.v2))
        if self.v1 < 0:
            raise InvalidArgumentError("Power exponent must be >= 0, got " + str(self.v1))

    @classmethod
    def from_weight(cls, weight):
        v2 = weight[1] if weight.dimension > 1 else Fraction(0)
        return cls(weight[0], v2)

    def __mul__(self, other):
        return WeightFunction(self.v1 + other.v1, self.v2 + other.v2)

    def log_value(self, r):
        r = float(r)
        return float(self.v1) * math.log(r) + float(self.v2) * math.log(math.e + r)

    def eval(self, r):
        """Exact when v2 = 0 and r^v1 is rational; float otherwise."""
        if r < 1:
            raise InvalidArgumentError("Weight functions are evaluated on [1, inf), got " + str(r))
        if self.v2 == 0 and not isinstance(r, float):
            exact = _exact_power(r, self.v1)
            if exact is not None:
                return exact
            return float(Fraction(r)) ** float(self.v1)
        return math.exp(self.log_value(r))

    __call__ = eval

    def at_one(self):
        return self.eval(1)

    def invert(self, y):
        """
        Smallest r >= 1 with F(r) = y, to relative tolerance 2^-40.
        """
        floor = self.at_one()
        if y < floor:
            raise InvalidArgumentError("Cannot invert below F(1) = {}: {}".format(floor, y))
        if self.v1 == 0 and self.v2 == 0:
            return 1
        if self.v2 == 0 and not isinstance(y, float):
            exact = _exact_power(y, 1 / self.v1)
            if exact is not None:
                return exact
        target = math.log(float(y))
        v1, v2 = float(self.v1), float(self.v2)

        def excess(t):
            return v1 * t + v2 * math.log(np.logaddexp(1.0, t)) - target

        upper = 1.0
        while excess(upper) < 0:
            upper *= 2.0
        if excess(0.0) >= 0:
            return 1.0
        t = optimize.bisect(excess, 0.0, upper, xtol=INVERSION_RTOL, rtol=INVERSION_RTOL)
        return math.exp(t)

    def to_json(self):
        return {"v1": format_rational(self.v1), "v2": format_rational(self.v2)}


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Compatible Pair
@dataclass(frozen=True)
class CompatiblePair:
    """A weight system with its per-generator weight functions."""

    weight_system: WeightSystem
    weight_functions: tuple

    def __post_init__(self):
        if len(self.weight_functions) != self.weight_system.k:
            raise InvalidArgumentError("One weight function per generator is required")
        for w, f in zip(self.weight_system.weights, self.weight_functions):
            if WeightFunction.from_weight(w) != f:
                raise InvalidArgumentError("Weight function {} does not match weight {}".format(f, w))

    @classmethod
    def from_system(cls, system):
        return cls(system, tuple(WeightFunction.from_weight(w) for w in system.weights))

    def function_of(self, c):
        """F_c: product of the leaf functions."""
        return WeightFunction.from_weight(weight_of(c, self.weight_system))

    def project(self, dimension):
        return CompatiblePair.from_system(self.weight_system.project(dimension))


def effective_alpha(alpha):
    """min(alpha, 2); alpha may be math.inf."""
    alpha = parse_rational(alpha)
    if alpha != math.inf and alpha <= 0:
        raise InvalidArgumentError("Stable exponents must be positive, got " + str(alpha))
    return Fraction(2) if alpha == math.inf or alpha >= 2 else alpha


def weights_from_alpha(a, dimension=2):
    """
    Weight system induced by the exponents a: w_i = 1/min(alpha_i, 2) and, in
    dimension 2, a second coordinate 1/2 exactly when alpha_i = 2.
    """
    if dimension not in (1, 2):
        raise InvalidArgumentError("dimension must be 1 or 2, got " + str(dimension))
    weights = []
    for alpha in a:
        alpha = parse_rational(alpha)
        first = 1 / effective_alpha(alpha)
        if dimension == 1:
            weights.append(WeightVec.of(first))
        else:
            second = Fraction(1, 2) if alpha == 2 else Fraction(0)
            weights.append(WeightVec.of(first, second))
    return CompatiblePair.from_system(WeightSystem(tuple(weights)))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# JSON
def weight_system_to_json(system):
    return [[format_rational(c) for c in w.coords] for w in system.weights]


def weight_system_from_json(data):
    """Accepts [["1","0"], ...] or the 1-dim shorthand ["1", "3/2", ...]."""
    weights = []
    for entry in data:
        if isinstance(entry, (list, tuple)):
            weights.append(WeightVec(tuple(parse_rational(c) for c in entry)))
        else:
            weights.append(WeightVec.of(parse_rational(entry)))
    return WeightSystem(tuple(weights))


__all__ = [
    "WeightVec",
    "WeightSystem",
    "WeightFunction",
    "CompatiblePair",
    "weight_of",
    "weight_value_sequence",
    "effective_alpha",
    "weights_from_alpha",
    "weight_system_to_json",
    "weight_system_from_json",
]
