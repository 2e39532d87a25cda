"""
Walker Module

Batched walk engines, the collision estimator of mu^(2n)(e) and the exact
convolution oracle on Z^d.

A walk model turns random streams into step arrays: integer vectors for Z^d,
unitriangular integer matrices otherwise (free nilpotent groups walk through
their regular representation). Endpoints of N independent n-step walks are
counted by hashing; equal-endpoint pairs give an unbiased estimate of
sum_x mu^(n)(x)^2 = mu^(2n)(e).

Samples are split into fixed-size batches and batch b of horizon n always
draws from the substream (n, b) of the master seed, so estimates do not depend
on the number of workers.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import collections
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.signal import fftconvolve

from .._utils import format_rational, generalized_binomial
from ..algebra.groups import FreeNilpotentBackend, UnitriangularBackend, ZdBackend, hall_to_regular_matrix
from ..errors import InvalidArgumentError, ResourceLimitError, UnsupportedError
from .laws import INT64_LIMIT, StepLaw, stream

logger = logging.getLogger(__name__)

BATCH_SIZE = 50000
ENDPOINT_BUDGET = 2 * 10 ** 7
TABLE_BUDGET = 10 ** 7
CONVOLUTION_CUTOFF = 2 ** 16


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Walk Models
class WalkModel:
    """
    Step source for the engines.

    Attributes:
        kind (str): "vector" or "matrix".
        d (int): Vector length or matrix size.
    """

    kind = None
    d = None

    def steps(self, rng, size):
        raise NotImplementedError

    def step_elements(self, rng, size):
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


def _matrix_images(spec):
    backend = spec.backend
    if isinstance(backend, UnitriangularBackend):
        return [g.payload for g in spec.generators]
    if isinstance(backend, FreeNilpotentBackend):
        return [hall_to_regular_matrix(g) for g in spec.generators]
    raise UnsupportedError("No walk engine for backend " + backend.name)


class StableWalkModel(WalkModel):
    """Steps s_i^m of mu_{S,a}."""

    def __init__(self, spec, a):
        if len(a) != spec.k:
            raise InvalidArgumentError("Need one exponent per generator: {} for k={}".format(len(a), spec.k))
        self.spec = spec
        self.law = StepLaw(tuple(a))
        if isinstance(spec.backend, ZdBackend):
            self.kind = "vector"
            self.d = spec.backend.d
            self.vectors = np.array([g.payload for g in spec.generators], dtype=np.int64)
        else:
            self.kind = "matrix"
            images = [np.array(m, dtype=object) for m in _matrix_images(spec)]
            self.d = images[0].shape[0]
            identity = np.identity(self.d, dtype=np.int64).astype(object)
            nilpotent = [m - identity for m in images]
            # powers[i, p] = (s_i - 1)^p
            self.powers = np.empty((spec.k, self.d, self.d, self.d), dtype=object)
            for i, x in enumerate(nilpotent):
                current = identity
                for p in range(self.d):
                    self.powers[i, p] = current
                    current = current @ x

    def steps(self, rng, size):
        indices, exponents = self.law.sample(rng, size)
        if self.kind == "vector":
            if exponents.dtype == object:
                return exponents[:, None] * self.vectors[indices].astype(object)
            return exponents[:, None] * self.vectors[indices]
        result = np.zeros((size, self.d, self.d), dtype=object)
        for p in range(self.d):
            coefficients = np.array([generalized_binomial(int(m), p) for m in exponents], dtype=object)
            result = result + coefficients[:, None, None] * self.powers[indices, p]
        return result

    def step_elements(self, rng, size):
        backend = self.spec.backend
        indices, exponents = self.law.sample(rng, size)
        return [backend.power(self.spec.generators[i], int(m)) for i, m in zip(indices, exponents)]

    def to_json(self):
        return {"measure": "stable", "a": [format_rational(a) for a in self.law.alphas]}


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Engines
def _abs_max(array):
    if array.size == 0:
        return 0
    if array.dtype == object:
        return max(abs(int(v)) for v in array.flat)
    return int(np.max(np.abs(array)))


def run_vectors(model, n, size, rng):
    """Endpoints of `size` walks on Z^d as a (size, d) integer array."""
    positions = np.zeros((size, model.d), dtype=np.int64)
    bound = 0
    for _ in range(n):
        step = model.steps(rng, size)
        bound += _abs_max(step)
        if positions.dtype != object and (step.dtype == object or bound >= INT64_LIMIT):
            positions = positions.astype(object)
        positions = positions + (step.astype(object) if positions.dtype == object else step)
    return positions


def run_matrices(model, n, size, rng):
    """Endpoints of `size` matrix walks as a (size, d, d) integer array."""
    positions = np.broadcast_to(np.identity(model.d, dtype=np.int64), (size, model.d, model.d)).copy()
    bound = 1
    for _ in range(n):
        step = model.steps(rng, size)
        if positions.dtype != object:
            step_bound = _abs_max(step)
            bound = model.d * bound * max(step_bound, 1)
            if bound < INT64_LIMIT:
                positions = positions @ step.astype(np.int64)
                continue
            positions = positions.astype(object)
        positions = positions @ step
    return positions


def endpoints(model, n, size, rng):
    if model.kind == "vector":
        return run_vectors(model, n, size, rng)
    return run_matrices(model, n, size, rng).reshape(size, model.d * model.d)


def endpoint_counts(points):
    """Counter of endpoint rows."""
    if points.dtype != object:
        rows, counts = np.unique(points, axis=0, return_counts=True)
        return collections.Counter({tuple(int(v) for v in row): int(c) for row, c in zip(rows, counts)})
    return collections.Counter(tuple(int(v) for v in row) for row in points.tolist())


def sample_walk(model, n, rng):
    """Endpoint of one n-step walk as a GroupElement."""
    if n < 0:
        raise InvalidArgumentError("Walk length must be >= 0, got " + str(n))
    backend = model.spec.backend
    position = backend.identity()
    for step in model.step_elements(rng, n):
        position = backend.multiply(position, step)
    return position


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Collision Estimator
@dataclass
class CollisionEstimate:
    """
    Attributes:
        n (int): Horizon; the estimate targets mu^(2n)(e).
        samples (int): N.
        colliding_pairs (int): Equal-endpoint pairs among the N endpoints.
        estimate (float): colliding_pairs / C(N, 2).
        stderr (float): Square root of the U-statistic variance estimate.
    """

    n: int
    samples: int
    colliding_pairs: int
    estimate: float
    stderr: float
    colliding_triples: int = 0

    def to_row(self):
        return {"n": self.n, "estimate": self.estimate, "stderr": self.stderr,
                "pairs": self.colliding_pairs, "N": self.samples}


def estimate_from_counts(counts, n, samples):
    pairs = sum(c * (c - 1) // 2 for c in counts.values())
    triples = sum(c * (c - 1) * (c - 2) // 6 for c in counts.values())
    total_pairs = math.comb(samples, 2)
    total_triples = math.comb(samples, 3)
    p = pairs / total_pairs
    cubes = triples / total_triples if total_triples else 0.0
    variance = (4 * (samples - 2) * (cubes - p * p) + 2 * (p - p * p)) / (samples * (samples - 1))
    return CollisionEstimate(n, samples, pairs, p, math.sqrt(max(variance, 0.0)), triples)


def _batch_counts(model, n, size, seed, batch):
    return endpoint_counts(endpoints(model, n, size, stream(seed, n, batch)))


def _batches(samples, batch_size):
    full, rest = divmod(samples, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def collision_estimate(model, n, samples, seed, workers=1, batch_size=BATCH_SIZE):
    """Collision estimate of mu^(2n)(e) from `samples` independent n-step walks."""
    if samples < 2:
        raise InvalidArgumentError("At least two samples are needed, got " + str(samples))
    if n < 0:
        raise InvalidArgumentError("Walk length must be >= 0, got " + str(n))
    if n == 0:
        return CollisionEstimate(0, samples, math.comb(samples, 2), 1.0, 0.0, math.comb(samples, 3))
    sizes = _batches(samples, batch_size)
    tasks = [(model, n, size, seed, b) for b, size in enumerate(sizes)]
    counts = collections.Counter()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_batch_counts, *zip(*tasks))
            for partial in results:
                counts.update(partial)
                if len(counts) > ENDPOINT_BUDGET:
                    raise ResourceLimitError("More than {} distinct endpoints".format(ENDPOINT_BUDGET))
    else:
        for task in tasks:
            counts.update(_batch_counts(*task))
            if len(counts) > ENDPOINT_BUDGET:
                raise ResourceLimitError("More than {} distinct endpoints".format(ENDPOINT_BUDGET))
    estimate = estimate_from_counts(counts, n, samples)
    logger.debug("n=%d: %d pairs among %d endpoints, estimate %.6g", n, estimate.colliding_pairs, samples,
                 estimate.estimate)
    return estimate


@dataclass
class CollisionSeries:
    estimates: list = field(default_factory=list)
    truncated: bool = False
    reason: str = ""

    def points(self):
        return [(e.n, e.estimate, e.stderr) for e in self.estimates]


def collision_series(model, n_grid, samples, seed, workers=1, budget_seconds=None, batch_size=BATCH_SIZE):
    """Estimates over a horizon grid; stops early on a budget and marks the series truncated."""
    series = CollisionSeries()
    start = time.monotonic()
    for n in n_grid:
        if budget_seconds is not None and time.monotonic() - start > budget_seconds:
            series.truncated = True
            series.reason = "wall-clock budget of {}s exhausted before n={}".format(budget_seconds, n)
            logger.warning("Stopping: %s", series.reason)
            break
        try:
            series.estimates.append(collision_estimate(model, n, samples, seed, workers, batch_size))
        except ResourceLimitError as error:
            series.truncated = True
            series.reason = str(error)
            logger.warning("Stopping at n=%d: %s", n, error)
            break
        logger.info("n=%d: estimate %.6g +- %.2g", n, series.estimates[-1].estimate, series.estimates[-1].stderr)
    return series


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Exact Convolution
@dataclass
class ConvolutionTable:
    """
    Distribution of the n-step walk on Z^d.

    Attributes:
        n (int): Number of steps.
        d (int): Dimension.
        probabilities (dict): Exact Fractions keyed by point, when `exact`.
        array (np.ndarray): Dense float table centred at `offset`, otherwise.
        offset (int): Index of the origin along each axis.
        tail_mass (float): Mass dropped by truncating the step law.
    """

    n: int
    d: int
    exact: bool
    probabilities: dict = None
    array: np.ndarray = None
    offset: int = 0
    tail_mass: float = 0.0

    def probability(self, point):
        point = tuple(point)
        if self.exact:
            return self.probabilities.get(point, Fraction(0))
        index = tuple(x + self.offset for x in point)
        if any(i < 0 or i >= self.array.shape[0] for i in index):
            return 0.0
        return float(self.array[index])

    def return_probability(self):
        return self.probability((0,) * self.d)

    def collision_value(self):
        """sum_x P(x)^2 = mu^(2n)(e)."""
        if self.exact:
            return sum((p * p for p in self.probabilities.values()), Fraction(0))
        return float(np.sum(self.array ** 2))

    def to_json(self):
        if self.exact:
            table = [{"x": list(x), "p": format_rational(p)} for x, p in sorted(self.probabilities.items())]
        else:
            table = None
        return {
            "n": self.n,
            "d": self.d,
            "exact": self.exact,
            "table": table,
            "return_probability": str(self.return_probability()),
            "collision_value": str(self.collision_value()),
            "tail_mass": self.tail_mass,
        }


def _exact_convolution(vectors, n):
    k = len(vectors)
    d = len(vectors[0])
    step = collections.Counter()
    for v in vectors:
        for m in (-1, 0, 1):
            step[tuple(m * x for x in v)] += Fraction(1, 3 * k)
    table = {(0,) * d: Fraction(1)}
    for _ in range(n):
        nxt = collections.Counter()
        for x, p in table.items():
            for y, q in step.items():
                nxt[tuple(a + b for a, b in zip(x, y))] += p * q
        table = dict(nxt)
        if len(table) > TABLE_BUDGET:
            raise ResourceLimitError("Exact convolution table exceeds {} entries".format(TABLE_BUDGET))
    return ConvolutionTable(n, d, True, probabilities=table)


def exact_convolution(spec, a, n, cutoff=CONVOLUTION_CUTOFF):
    """
    Law of the n-step walk of mu_{S,a} on Z^d.

    Exact (Fractions) when every alpha is infinite; otherwise the step law is
    truncated at |m| <= cutoff and the dropped mass is recorded.
    """
    if not isinstance(spec.backend, ZdBackend):
        raise UnsupportedError("Exact convolution is only available on Z^d")
    if n < 0:
        raise InvalidArgumentError("n must be >= 0, got " + str(n))
    vectors = [g.payload for g in spec.generators]
    law = StepLaw(tuple(a))
    if len(law.alphas) != spec.k:
        raise InvalidArgumentError("Need one exponent per generator")
    d = spec.backend.d
    if all(alpha == math.inf for alpha in law.alphas):
        return _exact_convolution(vectors, n)

    reach = cutoff * max(max(abs(x) for x in v) for v in vectors)
    side = 2 * reach * max(n, 1) + 1
    if side ** d > TABLE_BUDGET:
        raise ResourceLimitError("Convolution table of {}^{} entries exceeds {}".format(side, d, TABLE_BUDGET))
    step = np.zeros((2 * reach + 1,) * d)
    kept = 0.0
    for i, v in enumerate(vectors):
        effective = cutoff if law.alphas[i] != math.inf else 1
        weights = law.law(i).probabilities(effective) / spec.k
        for m, p in zip(range(-effective, effective + 1), weights):
            step[tuple(reach + m * x for x in v)] += p
        kept += float(np.sum(weights))
    table = np.zeros((1,) * d)
    table[(0,) * d] = 1.0
    for _ in range(n):
        table = np.clip(fftconvolve(table, step, mode="full"), 0.0, None)
    offset = (table.shape[0] - 1) // 2
    tail_mass = 1.0 - kept ** n
    if tail_mass > 0:
        logger.warning("Convolution truncated at |m| <= %d drops mass %.3g", cutoff, tail_mass)
    return ConvolutionTable(n, d, False, array=table, offset=offset, tail_mass=tail_mass)


__all__ = [
    "BATCH_SIZE",
    "WalkModel",
    "StableWalkModel",
    "run_vectors",
    "run_matrices",
    "endpoints",
    "endpoint_counts",
    "sample_walk",
    "CollisionEstimate",
    "estimate_from_counts",
    "collision_estimate",
    "CollisionSeries",
    "collision_series",
    "ConvolutionTable",
    "exact_convolution",
]
