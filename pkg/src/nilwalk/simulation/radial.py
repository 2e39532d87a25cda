"""
Radial Module

Norm-radial step laws nu_gamma(g) proportional to (1 + |g|)^-gamma / V(|g|),
where |.| is the word norm and V(r) the volume of the ball of radius r.

On Z^2 with the standard generators the shells are explicit: the sphere of
radius r > 0 has 4r points and V(r) = 2r^2 + 2r + 1. Shell radii up to
HEAD_CUTOFF are drawn by table inversion and larger ones by the same Pareto
rejection as the stable-like tails, so that law is sampled exactly. Every
other group is sampled from breadth-first shells up to an enumeration radius.
The mass beyond that radius is bounded from the measured volume growth, and a
truncation dropping more than `max_truncated_mass` of the law is refused.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import logging
import math

import numpy as np
from scipy.special import zeta

from ..algebra.geometry import word_ball
from ..algebra.groups import FreeNilpotentBackend, ZdBackend, hall_to_regular_matrix
from ..errors import InvalidArgumentError, ResourceLimitError
from .laws import HEAD_CUTOFF, as_integers, pareto_tail
from .walker import WalkModel

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_RADIUS = 12
MAX_TRUNCATED_MASS = 0.01


def check_gamma(gamma):
    gamma = float(gamma)
    if not 0 < gamma < 2:
        raise InvalidArgumentError("gamma must lie strictly between 0 and 2, got " + str(gamma))
    return gamma


def _is_standard_z2(spec):
    if not isinstance(spec.backend, ZdBackend) or spec.backend.d != 2:
        return False
    return sorted(g.payload for g in spec.generators) == [(0, 1), (1, 0)]


def _z2_shell_mass(r, gamma):
    r = np.asarray(r, dtype=np.float64)
    mass = 4.0 * r * (1.0 + r) ** (-gamma) / (2.0 * r * r + 2.0 * r + 1.0)
    return np.where(r == 0, 1.0, mass)


def _z2_log_acceptance(u, gamma):
    """log of gamma f(u) / (2 ((u-1/2)^-gamma - (u+1/2)^-gamma)) with f the shell mass."""
    log_width = gamma * np.log(u - 0.5) - np.log(-np.expm1(gamma * np.log1p(-1.0 / (u + 0.5))))
    log_mass = math.log(4.0) + np.log(u) - gamma * np.log1p(u) - np.log(2.0 * u * u + 2.0 * u + 1.0)
    return math.log(gamma / 2.0) + log_mass + log_width


def _z2_points(radii, rng):
    """Uniform points on the l1 spheres of the given radii."""
    size = radii.shape[0]
    quadrant = rng.integers(0, 4, size=size)
    fraction = rng.random(size)
    if radii.dtype == object:
        t = np.array([int(f * r) for f, r in zip(fraction, radii)], dtype=object)
    else:
        t = np.floor(fraction * radii).astype(np.int64)
    a, b = radii - t, t
    # quadrant q rotates (r - t, t) by q quarter turns
    x = np.select([quadrant == 0, quadrant == 1, quadrant == 2], [a, -b, -a], b)
    y = np.select([quadrant == 0, quadrant == 1, quadrant == 2], [b, a, -b], -a)
    return np.stack([x, y], axis=1)


class RadialWalkModel(WalkModel):
    """
    Steps of nu_gamma for the word norm of `spec`.

    Attributes:
        gamma (float): Radial exponent in (0, 2).
        exact (bool): Closed-form Z^2 shells with an exact tail.
        truncated_mass (float): Bound on the mass beyond the enumerated shells.
        max_truncated_mass (float): Largest truncated mass accepted.
    """

    def __init__(self, spec, gamma, radius=DEFAULT_ENUMERATION_RADIUS, max_truncated_mass=MAX_TRUNCATED_MASS):
        self.spec = spec
        self.gamma = check_gamma(gamma)
        self.radius = radius
        self.max_truncated_mass = float(max_truncated_mass)
        self.truncated_mass = 0.0
        self.exact = _is_standard_z2(spec)
        if self.exact:
            self.kind = "vector"
            self.d = 2
            self._init_z2()
        else:
            self._init_ball()

    def _init_z2(self):
        radii = np.arange(0, HEAD_CUTOFF + 1, dtype=np.float64)
        head = _z2_shell_mass(radii, self.gamma)
        # sum over r > cutoff of 2 (1 + r)^(-gamma-1); the remainder is below 2^-40 relative
        tail = 2.0 * float(zeta(self.gamma + 1.0, HEAD_CUTOFF + 2))
        total = float(np.sum(head)) + tail
        self.head_cdf = np.cumsum(head) / total
        self.tail_probability = tail / total

    def _init_ball(self):
        backend = self.spec.backend
        ball = word_ball(self.spec, self.radius)
        volumes = np.cumsum(ball.sizes).astype(np.float64)
        radii = np.arange(len(ball.sizes), dtype=np.float64)
        masses = np.array(ball.sizes) * (1.0 + radii) ** (-self.gamma) / volumes
        growth = math.log(volumes[-1] / volumes[len(volumes) // 2]) / math.log(radii[-1] / radii[len(volumes) // 2])
        # shells past R carry about sum_{r > R} (growth / r) r^-gamma <= growth / (gamma R^gamma)
        tail = growth / (self.gamma * self.radius ** self.gamma)
        self.truncated_mass = tail / (float(np.sum(masses)) + tail)
        if self.truncated_mass > self.max_truncated_mass:
            raise ResourceLimitError(
                "Radial law on {} truncated at radius {} drops about {:.3g} of its mass (allowed {:.3g}); "
                "enumerate a larger radius or accept the truncation with max_truncated_mass".format(
                    self.spec.label or backend.name, self.radius, self.truncated_mass, self.max_truncated_mass))
        logger.warning("Radial law truncated at radius %d; dropped mass at most %.3g", self.radius, self.truncated_mass)
        self.shell_cdf = np.cumsum(masses) / np.sum(masses)
        self.shells = ball.spheres
        self.shell_starts = np.concatenate([[0], np.cumsum(ball.sizes)])
        elements = [g for sphere in ball.spheres for g in sphere]
        self.elements = elements
        if isinstance(backend, ZdBackend):
            self.kind = "vector"
            self.d = backend.d
            self.table = np.array([g.payload for g in elements], dtype=np.int64)
        elif isinstance(backend, FreeNilpotentBackend):
            self.kind = "matrix"
            matrices = [hall_to_regular_matrix(g) for g in elements]
            self.d = len(matrices[0])
            self.table = np.array(matrices, dtype=object)
        else:
            self.kind = "matrix"
            self.d = backend.d
            self.table = np.array([g.payload for g in elements], dtype=object)

    def _sample_radii(self, rng, size):
        u = rng.random(size)
        radii = np.searchsorted(self.head_cdf, u, side="right").astype(np.float64)
        in_tail = radii > HEAD_CUTOFF
        if in_tail.any():
            gamma = self.gamma
            radii[in_tail] = pareto_tail(rng, int(in_tail.sum()), gamma, HEAD_CUTOFF,
                                         lambda v: _z2_log_acceptance(v, gamma))
        return as_integers(radii, "radial")

    def _sample_indices(self, rng, size):
        shells = np.minimum(np.searchsorted(self.shell_cdf, rng.random(size), side="right"), len(self.shells) - 1)
        sizes = self.shell_starts[shells + 1] - self.shell_starts[shells]
        return self.shell_starts[shells] + np.floor(rng.random(size) * sizes).astype(np.int64)

    def steps(self, rng, size):
        if self.exact:
            return _z2_points(self._sample_radii(rng, size), rng)
        return self.table[self._sample_indices(rng, size)]

    def step_elements(self, rng, size):
        if self.exact:
            backend = self.spec.backend
            return [backend.element(tuple(int(v) for v in row)) for row in self.steps(rng, size)]
        return [self.elements[i] for i in self._sample_indices(rng, size)]

    def to_json(self):
        return {
            "measure": "radial",
            "gamma": self.gamma,
            "exact": self.exact,
            "enumeration_radius": None if self.exact else self.radius,
            "truncated_mass": self.truncated_mass,
            "max_truncated_mass": self.max_truncated_mass,
        }


def radial_model(spec, gamma, radius=DEFAULT_ENUMERATION_RADIUS, max_truncated_mass=MAX_TRUNCATED_MASS):
    if radius < 2:
        raise InvalidArgumentError("Enumeration radius must be >= 2, got " + str(radius))
    if not 0 <= max_truncated_mass < 1:
        raise InvalidArgumentError("max_truncated_mass must lie in [0, 1), got " + str(max_truncated_mass))
    return RadialWalkModel(spec, gamma, radius, max_truncated_mass)


__all__ = [
    "check_gamma",
    "RadialWalkModel",
    "radial_model",
]
