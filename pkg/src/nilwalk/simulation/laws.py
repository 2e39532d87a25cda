"""
Laws Module

Symmetric stable-like step laws on Z: P(m) = c(alpha) (1 + |m|)^(-alpha-1) with
c(alpha)^-1 = 2 zeta(alpha + 1) - 1, and the uniform law on {-1, 0, 1} for
alpha = inf.

Magnitudes up to HEAD_CUTOFF are drawn by inversion against a table of exact
tail probabilities (Hurwitz zeta). Beyond it a rounded continuous Pareto
proposal is accepted with the ratio of the discrete mass to the proposal mass,
so the tail is exact as well.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import zeta

from .._utils import format_rational, parse_rational
from ..errors import InvalidArgumentError

logger = logging.getLogger(__name__)

HEAD_CUTOFF = 2 ** 20
MIN_ALPHA = Fraction(1, 16)
FLOAT_EXACT_LIMIT = 2 ** 53
INT64_LIMIT = 2 ** 62


def stream(seed, *key):
    """Counter-based generator for the substream `key` of the master seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(key))))


def _log_tail_acceptance(u, alpha):
    """log of alpha (1+u)^(-alpha-1) / ((u-1/2)^-alpha - (u+1/2)^-alpha); always <= 0."""
    log_width = alpha * np.log(u - 0.5) - np.log(-np.expm1(alpha * np.log1p(-1.0 / (u + 0.5))))
    return math.log(alpha) - (alpha + 1) * np.log1p(u) + log_width


def pareto_tail(rng, size, alpha, cutoff, log_acceptance):
    """
    Integers u > cutoff drawn exactly from a law dominated by the rounded
    Pareto proposal (cutoff + 1/2) V^(-1/alpha); `log_acceptance(u)` gives the
    log acceptance ratio of the target.
    """
    result = np.empty(size, dtype=np.float64)
    pending = np.arange(size)
    while pending.size:
        v = 1.0 - rng.random(pending.size)
        u = np.floor((cutoff + 0.5) * v ** (-1.0 / alpha) + 0.5)
        accept = np.log(1.0 - rng.random(pending.size)) <= log_acceptance(u)
        result[pending[accept]] = u[accept]
        pending = pending[~accept]
    return result


def as_integers(values, label):
    """int64 array when every value fits, else an object array of Python ints."""
    largest = float(np.max(values)) if values.size else 0.0
    if largest < INT64_LIMIT:
        return values.astype(np.int64)
    if largest >= FLOAT_EXACT_LIMIT:
        logger.warning("%s step magnitude %.3g exceeds 2^53 and is float-granular", label, largest)
    return np.array([int(v) for v in values], dtype=object)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Stable-Like Law
@dataclass(frozen=True)
class StableLaw:
    """
    Attributes:
        alpha (Fraction): Exponent in [1/16, inf), or math.inf.
        head_cutoff (int): Largest magnitude drawn by table inversion.
    """

    alpha: object
    head_cutoff: int = HEAD_CUTOFF

    def __post_init__(self):
        alpha = parse_rational(self.alpha)
        if alpha != math.inf and alpha < MIN_ALPHA:
            raise InvalidArgumentError("alpha must be >= {} or inf, got {}".format(MIN_ALPHA, alpha))
        object.__setattr__(self, "alpha", alpha)

    @property
    def is_uniform(self):
        return self.alpha == math.inf

    @functools.cached_property
    def normalization(self):
        """c(alpha)."""
        if self.is_uniform:
            return 1.0 / 3.0
        return 1.0 / (2.0 * float(zeta(float(self.alpha) + 1.0)) - 1.0)

    @functools.cached_property
    def tail_table(self):
        """tail_table[K] = P(|m| > K) for K = 0..head_cutoff."""
        s = float(self.alpha) + 1.0
        return 2.0 * self.normalization * zeta(s, np.arange(2, self.head_cutoff + 3, dtype=np.float64))

    def probability(self, m):
        m = abs(int(m))
        if self.is_uniform:
            return 1.0 / 3.0 if m <= 1 else 0.0
        return self.normalization * (1.0 + m) ** (-float(self.alpha) - 1.0)

    def probabilities(self, radius):
        """P(m) for m = -radius..radius."""
        if self.is_uniform:
            m = np.arange(-radius, radius + 1)
            return np.where(np.abs(m) <= 1, 1.0 / 3.0, 0.0)
        m = np.abs(np.arange(-radius, radius + 1, dtype=np.float64))
        return self.normalization * (1.0 + m) ** (-float(self.alpha) - 1.0)

    def tail_probability(self, t):
        """P(|m| > t)."""
        if self.is_uniform:
            return 0.0 if t >= 1 else 2.0 / 3.0
        return 2.0 * self.normalization * float(zeta(float(self.alpha) + 1.0, t + 2))

    def sample(self, rng, size):
        """Signed exponents; int64, or Python ints when a magnitude exceeds 2^62."""
        if self.is_uniform:
            return rng.integers(-1, 2, size=size)
        u = 1.0 - rng.random(size)
        magnitude = np.searchsorted(-self.tail_table, -u, side="right").astype(np.float64)
        in_tail = magnitude > self.head_cutoff
        if in_tail.any():
            alpha = float(self.alpha)
            magnitude[in_tail] = pareto_tail(
                rng, int(in_tail.sum()), alpha, self.head_cutoff, lambda v: _log_tail_acceptance(v, alpha)
            )
        signs = rng.integers(0, 2, size=size) * 2 - 1
        magnitude = as_integers(magnitude, "alpha=" + format_rational(self.alpha))
        return magnitude * signs.astype(magnitude.dtype)


@functools.lru_cache(maxsize=None)
def stable_law(alpha):
    return StableLaw(parse_rational(alpha))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Step Law
@dataclass(frozen=True)
class StepLaw:
    """mu_{S,a}: a uniform generator index, then an exponent from its stable law."""

    alphas: tuple

    def __post_init__(self):
        if not self.alphas:
            raise InvalidArgumentError("A step law needs at least one exponent")
        object.__setattr__(self, "alphas", tuple(parse_rational(a) for a in self.alphas))

    @property
    def k(self):
        return len(self.alphas)

    def law(self, i):
        return stable_law(self.alphas[i])

    def sample(self, rng, size):
        """(0-based indices, exponents) for `size` independent steps."""
        indices = rng.integers(0, self.k, size=size)
        exponents = np.zeros(size, dtype=np.int64)
        for i in range(self.k):
            chosen = np.flatnonzero(indices == i)
            if chosen.size:
                drawn = self.law(i).sample(rng, chosen.size)
                if drawn.dtype == object and exponents.dtype != object:
                    exponents = exponents.astype(object)
                exponents[chosen] = drawn
        return indices, exponents


def sample_step(step_law, rng):
    """One step (1-based generator index, exponent)."""
    indices, exponents = step_law.sample(rng, 1)
    return int(indices[0]) + 1, int(exponents[0])


__all__ = [
    "HEAD_CUTOFF",
    "MIN_ALPHA",
    "stream",
    "pareto_tail",
    "as_integers",
    "StableLaw",
    "stable_law",
    "StepLaw",
    "sample_step",
]
