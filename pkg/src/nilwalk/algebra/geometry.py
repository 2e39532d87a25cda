"""
Geometry Module

Commutator bases adapted to a weight filtration, exponent coordinates
g = c_1^{x_1} ... c_t^{x_t}, the comparable radius r(g) = max_i F_{c_i}^{-1}(|x_i|),
power growth tables, ball volume profiles, box counts and word-metric balls.

A basis is built level by level, from the deepest level up. On level j the map
g -> (log g mod L_{j+1}) is a homomorphism onto a lattice of rank R_j, and the
level quotient G_j / G_{j+1} is that lattice extended by a finite group. Free
commutators are read off the lattice. The finite part is covered by extra
commutators; two exponent vectors over the extras name the same class when
their quotient lies in G_{j+1}, which the deeper levels already decide.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import collections
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InvalidArgumentError, NotInSpanError, ResourceLimitError
from .collection import hall_basis
from .filtration import IDENTITY_LEVEL, filtration, j_w
from .groups import FreeNilpotentBackend, eval_commutator
from .linalg import QuotientCoordinates, RationalSpan, inverse_matrix
from .weights import CompatiblePair, WeightFunction, weight_of

logger = logging.getLogger(__name__)

BOX_COUNT_BUDGET = 10 ** 7
QUOTIENT_BUDGET = 10 ** 4
WORD_BALL_BUDGET = 10 ** 6
GROWTH_ENVELOPE = 4


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Commutator Basis
def _residue(t):
    return tuple(x - math.floor(x) for x in t)


def _ordered_product(backend, elements, exponents):
    result = backend.identity()
    for element, x in zip(elements, exponents):
        if x:
            result = backend.multiply(result, backend.power(element, x))
    return result


@dataclass
class _LevelStrip:
    """
    One level of a commutator basis: the free commutators, then the extras.

    `classes` maps a lattice residue to the exponent vectors over the extras
    that represent distinct classes of G_j modulo the free part and G_{j+1}.
    """

    index: int
    phi: QuotientCoordinates
    to_lattice: list
    commutators: tuple
    elements: tuple
    n_free: int
    shifts: list = field(default_factory=list)
    classes: dict = field(default_factory=dict)

    @property
    def extra_elements(self):
        return self.elements[self.n_free:]

    @property
    def n_classes(self):
        return sum(len(bucket) for bucket in self.classes.values())

    def lattice_coordinates(self, y):
        return tuple(sum((a * b for a, b in zip(row, y)), Fraction(0)) for row in self.to_lattice)

    def shift_of(self, extra):
        total = [Fraction(0)] * self.n_free
        for coeff, shift in zip(extra, self.shifts):
            if coeff:
                total = [a + coeff * b for a, b in zip(total, shift)]
        return tuple(total)

    def product(self, backend, free, extra):
        return _ordered_product(backend, self.elements, tuple(free) + tuple(extra))


def _strip(g, strips, backend):
    """Per-level exponent tuples whose ordered product is g, or None when the strips do not generate g."""
    if not strips:
        return [] if backend.is_identity(g) else None
    strip, deeper = strips[0], strips[1:]
    vector = backend.lie_vector(g)
    if not strip.phi.outer.contains(vector):
        return None
    t = strip.lattice_coordinates(strip.phi(vector))
    for extra in strip.classes.get(_residue(t), ()):
        free = tuple(int(a - b) for a, b in zip(t, strip.shift_of(extra)))
        rest = backend.multiply(backend.invert(strip.product(backend, free, extra)), g)
        tail = _strip(rest, deeper, backend)
        if tail is not None:
            return [free + tuple(extra)] + tail
    return None


def _find_class(strip, shift, element, deeper, backend):
    """The stored representative congruent to `element` (lattice image `shift`), or None."""
    for known in strip.classes.get(_residue(shift), ()):
        free = tuple(int(a - b) for a, b in zip(shift, strip.shift_of(known)))
        base = strip.product(backend, free, known)
        if _strip(backend.multiply(backend.invert(base), element), deeper, backend) is not None:
            return known
    return None


def _close_classes(strip, deeper, backend):
    """Saturates the class table under multiplication by every extra commutator."""
    queue = collections.deque(e for bucket in strip.classes.values() for e in bucket)
    while queue:
        state = queue.popleft()
        for i in range(len(strip.shifts)):
            image = state[:i] + (state[i] + 1,) + state[i + 1:]
            shift = strip.shift_of(image)
            element = _ordered_product(backend, strip.extra_elements, image)
            if _find_class(strip, shift, element, deeper, backend) is not None:
                continue
            strip.classes.setdefault(_residue(shift), []).append(image)
            queue.append(image)
            if strip.n_classes > QUOTIENT_BUDGET:
                raise ResourceLimitError("Level {} quotient exceeds {} classes".format(strip.index, QUOTIENT_BUDGET))


def _pick_free(candidates, images, rank):
    span = RationalSpan(rank)
    free = []
    for c in candidates:
        if len(free) == rank:
            break
        if span.extend([images[c]]):
            free.append(c)
    if len(free) < rank:
        raise NotInSpanError("Level commutators span only {} of {} quotient directions".format(len(free), rank))
    return free


def _build_strip(spec, report, level, deeper):
    """
    Free commutators by lattice increments, then every level commutator whose
    class in G_j / G_{j+1} is not yet reached becomes an extra.
    """
    backend = spec.backend
    phi = QuotientCoordinates(report.span(level.index), report.span(level.index + 1))
    rank = phi.rank
    candidates = level.generating_commutators
    elements = {c: eval_commutator(c, spec) for c in candidates}
    images = {c: phi(backend.lie_vector(g)) for c, g in elements.items()}

    free = _pick_free(candidates, images, rank)
    to_lattice = []
    if rank:
        to_lattice = inverse_matrix([tuple(images[c][i] for c in free) for i in range(rank)])
    strip = _LevelStrip(level.index, phi, to_lattice, tuple(free), tuple(elements[c] for c in free), rank)
    strip.classes = {(Fraction(0),) * rank: [()]}

    for c in candidates:
        if c in free:
            continue
        shift = strip.lattice_coordinates(images[c])
        if _find_class(strip, shift, elements[c], deeper, backend) is not None:
            continue
        strip.commutators += (c,)
        strip.elements += (elements[c],)
        strip.shifts.append(shift)
        strip.classes = {key: [e + (0,) for e in bucket] for key, bucket in strip.classes.items()}
        _close_classes(strip, deeper, backend)

    logger.debug("Level %d: %d free, %d extra, %d classes", level.index, rank, len(strip.shifts), strip.n_classes)
    return strip


@dataclass
class CommutatorBasis:
    """
    Sigma = (c_1, ..., c_t) with non-decreasing weights.

    Attributes:
        spec (GroupSpec): The analysed group.
        pair (CompatiblePair): Weights and weight functions.
        commutators (tuple): The formal commutators c_i.
        elements (tuple): Their images in the group.
        weights (tuple): w(c_i).
        levels (tuple): Filtration level of each c_i.
        free (tuple): True for the first R_j commutators of each level.
        free_counts (tuple): R_j per level.
        hall (bool): Sigma is the Hall basis and coordinates are Hall exponents.
    """

    spec: object
    pair: CompatiblePair
    commutators: tuple
    elements: tuple
    weights: tuple
    levels: tuple
    free: tuple
    free_counts: tuple
    hall: bool = False
    strips: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.commutators)

    def functions(self):
        return tuple(WeightFunction.from_weight(w) for w in self.weights)

    def evaluate(self, exponents):
        """c_1^{x_1} ... c_t^{x_t}."""
        return _ordered_product(self.spec.backend, self.elements, exponents)

    def to_json(self):
        return {
            "commutators": [str(c) for c in self.commutators],
            "weights": [str(w) for w in self.weights],
            "levels": list(self.levels),
            "free": list(self.free),
            "free_counts": list(self.free_counts),
            "hall": self.hall,
        }


def _hall_basis_if_adapted(spec, pair, report):
    backend = spec.backend
    if not isinstance(backend, FreeNilpotentBackend):
        return None
    if spec.generators != tuple(backend.generator(i) for i in range(1, backend.k + 1)):
        return None
    basis = hall_basis(backend.k, backend.l)
    weights = tuple(weight_of(c, pair.weight_system) for c in basis.commutators)
    if any(a > b for a, b in zip(weights, weights[1:])):
        return None
    level_of = {level.weight_value: level.index for level in report.levels}
    if any(w not in level_of for w in weights):
        return None
    counts = collections.Counter(level_of[w] for w in weights)
    if tuple(counts.get(level.index, 0) for level in report.levels) != report.ranks:
        return None
    units = []
    for i in range(len(basis)):
        exponents = [0] * len(basis)
        exponents[i] = 1
        units.append(backend.element(exponents))
    logger.debug("Using the Hall basis of N(%d,%d) as commutator basis", backend.k, backend.l)
    return CommutatorBasis(
        spec, pair, basis.commutators, tuple(units), weights,
        tuple(level_of[w] for w in weights), (True,) * len(basis), report.ranks, hall=True,
    )


def build_commutator_basis(spec, pair, report=None):
    """
    Certified commutator basis for `spec` under the weights of `pair`.

    Per level, free commutators are chosen by Lie-span increments and extras
    generate the finite part of G_j / G_{j+1}: [s2, s1] beside Z^5 when
    S = (X, Y, Z^5), or Z beside [s2, s1] = Z^-2 when S = (X^2, Y, Z).
    """
    if report is None:
        report = filtration(spec, pair.weight_system)
    hall = _hall_basis_if_adapted(spec, pair, report)
    if hall is not None:
        return hall

    strips = []
    for level in reversed(report.levels):
        if level.generating_commutators:
            strips.insert(0, _build_strip(spec, report, level, strips))

    commutators, elements, levels, free = [], [], [], []
    for strip in strips:
        commutators.extend(strip.commutators)
        elements.extend(strip.elements)
        levels.extend([strip.index] * len(strip.commutators))
        free.extend(i < strip.n_free for i in range(len(strip.commutators)))
    return CommutatorBasis(
        spec,
        pair,
        tuple(commutators),
        tuple(elements),
        tuple(report.levels[j - 1].weight_value for j in levels),
        tuple(levels),
        tuple(free),
        report.ranks,
        strips=strips,
    )


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Coordinates
def coordinates(g, basis):
    """Integer exponents x with c_1^{x_1} ... c_t^{x_t} = g."""
    backend = basis.spec.backend
    backend.check(g)
    if basis.hall:
        return tuple(g.payload)

    per_level = _strip(g, basis.strips, backend)
    if per_level is None:
        raise NotInSpanError("Element {} is not generated by the commutator basis".format(g))
    exponents = tuple(x for level in per_level for x in level)
    if basis.evaluate(exponents) != g:
        raise NotInSpanError("Stripping {} did not terminate at the identity".format(g))
    return exponents


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Quasi-Norm
@dataclass(frozen=True)
class QuasiNormValue:
    """
    Attributes:
        r_value (float): max_i F_{c_i}^{-1}(|x_i|); 0 for the identity.
        coordinates (tuple): The exponents the radius was computed from.
        exact (Fraction): r_value as a Fraction when every inversion was exact.
    """

    r_value: float
    coordinates: tuple
    exact: Fraction = None

    def to_json(self):
        return {
            "r": self.r_value,
            "exact": None if self.exact is None else str(self.exact),
            "coordinates": list(self.coordinates),
        }


def quasi_norm_radius(g, basis, pair=None):
    x = coordinates(g, basis)
    pair = pair or basis.pair
    functions = [pair.function_of(c) for c in basis.commutators]
    radii = []
    for f, value in zip(functions, x):
        if not value:
            continue
        size = abs(value)
        radii.append(1 if size <= f.at_one() else f.invert(size))
    if not radii:
        return QuasiNormValue(0.0, x, Fraction(0))
    radius = max(radii, key=float)
    exact = Fraction(radius) if not isinstance(radius, float) else None
    return QuasiNormValue(float(radius), x, exact)


@dataclass
class PowerGrowthTable:
    """
    Attributes:
        level (int): j_w(g).
        rows (list): (n, r(g^n), reference radius, ratio) per grid point.
        bounded (bool): Every ratio lies within [1/GROWTH_ENVELOPE, GROWTH_ENVELOPE].
    """

    level: int
    rows: list
    bounded: bool

    def to_json(self):
        return {
            "level": self.level,
            "rows": [{"n": n, "r": r, "reference": ref, "ratio": ratio} for n, r, ref, ratio in self.rows],
            "bounded": self.bounded,
        }


def power_growth_check(g, n_grid, basis, report):
    """Ratios r(g^n) / F_j^{-1}(n) with j = j_w(g)."""
    level = j_w(g, report)
    if level == IDENTITY_LEVEL:
        raise InvalidArgumentError("Power growth is undefined for the identity")
    reference = WeightFunction.from_weight(report.levels[level - 1].weight_value)
    backend = basis.spec.backend
    rows = []
    for n in n_grid:
        radius = quasi_norm_radius(backend.power(g, n), basis).r_value
        expected = float(reference.invert(n))
        rows.append((n, radius, expected, radius / expected))
    bounded = all(1 / GROWTH_ENVELOPE <= ratio <= GROWTH_ENVELOPE for *_, ratio in rows)
    return PowerGrowthTable(level, rows, bounded)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Volume
@dataclass(frozen=True)
class VolumeProfile:
    r: float
    value: float
    exponents: tuple

    def to_json(self):
        return {"r": self.r, "value": self.value, "exponents": [str(e) for e in self.exponents]}


def ball_volume(r, report):
    """prod_j F_j(r)^{R_j} and the exponent profile (sum_j w_j R_j per coordinate)."""
    if r < 1:
        raise InvalidArgumentError("Volumes are evaluated for r >= 1, got " + str(r))
    log_value = sum(
        level.rank * WeightFunction.from_weight(level.weight_value).log_value(r)
        for level in report.levels
    )
    return VolumeProfile(float(r), math.exp(log_value), report.D_components)


def box_count_oracle(r, basis, budget=BOX_COUNT_BUDGET):
    """Number of distinct products c_1^{x_1} ... c_t^{x_t} with |x_i| <= F_{c_i}(r)."""
    if r == 0:
        return 1
    if r < 1:
        raise InvalidArgumentError("Box radius must be 0 or >= 1, got " + str(r))
    bounds = [math.floor(f.eval(r)) for f in basis.functions()]
    size = math.prod(2 * b + 1 for b in bounds)
    if size > budget:
        raise ResourceLimitError("Box of {} products exceeds the budget of {}".format(size, budget))
    backend = basis.spec.backend
    products = {backend.identity()}
    for element, bound in zip(basis.elements, bounds):
        powers = [backend.power(element, x) for x in range(-bound, bound + 1)]
        products = {backend.multiply(p, q) for p in products for q in powers}
    logger.debug("Box of radius %s: %d distinct of %d products", r, len(products), size)
    return len(products)


def box_lower_bound(r, basis):
    """prod_i (2 F_{c_i}(r) + 1)."""
    return math.prod(2 * float(f.eval(r)) + 1 for f in basis.functions())


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Word Metric
@dataclass
class WordBall:
    """
    Attributes:
        spheres (list): spheres[n] lists the elements at word length exactly n.
    """

    spheres: list

    @property
    def radius(self):
        return len(self.spheres) - 1

    @property
    def sizes(self):
        return [len(sphere) for sphere in self.spheres]

    def volume(self, n):
        return sum(len(sphere) for sphere in self.spheres[:n + 1])


def word_ball(spec, radius, budget=WORD_BALL_BUDGET):
    """Breadth-first spheres of the Cayley graph of S and S^-1 up to `radius`."""
    backend = spec.backend
    steps = list(spec.generators) + [backend.invert(g) for g in spec.generators]
    seen = {backend.identity()}
    spheres = [[backend.identity()]]
    for n in range(1, radius + 1):
        sphere = []
        for g in spheres[-1]:
            for s in steps:
                h = backend.multiply(g, s)
                if h not in seen:
                    seen.add(h)
                    sphere.append(h)
        if len(seen) > budget:
            raise ResourceLimitError("Word ball of radius {} exceeds {} elements".format(n, budget))
        spheres.append(sphere)
    return WordBall(spheres)


__all__ = [
    "CommutatorBasis",
    "build_commutator_basis",
    "coordinates",
    "QuasiNormValue",
    "quasi_norm_radius",
    "PowerGrowthTable",
    "power_growth_check",
    "VolumeProfile",
    "ball_volume",
    "box_count_oracle",
    "box_lower_bound",
    "WordBall",
    "word_ball",
]
