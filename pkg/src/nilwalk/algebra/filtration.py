"""
Filtration Module

The weight filtration G = G^w_1 > G^w_2 > ... of a group spec, its torsion-free
ranks R^w_j and the exponent D(S, w) = sum_j w_j R^w_j.

Ranks are Hirsch-length differences. The Hirsch length of a level is the
dimension of the rational Lie algebra generated by the logarithms of its
generators, so every level is represented by a RationalSpan of Lie vectors.
Levels are closed from the top weight down: L_j is the Lie closure of L_{j+1}
together with the logarithms of the commutators of weight exactly w_j.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .._utils import format_rational, parse_rational
from ..errors import InvalidArgumentError, UnsupportedError
from .commutators import enumerate_commutators
from .groups import ZdBackend, backend_of, eval_commutator
from .linalg import RationalSpan, invariant_factors, integer_rank, row_echelon_basis
from .weights import WeightSystem, effective_alpha, weight_of, weight_value_sequence, weights_from_alpha

logger = logging.getLogger(__name__)

IDENTITY_LEVEL = "inf"


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Lie Closure
def _close(span, vectors, backend):
    """Smallest Lie subalgebra containing the Lie subalgebra `span` and `vectors`."""
    width = span.width
    fresh, _ = row_echelon_basis(vectors, width)
    result = span.copy()
    generators = span.basis + fresh
    if not result.extend(fresh):
        return result
    frontier = fresh
    while frontier:
        candidates = [backend.lie_bracket(u, g) for u in frontier for g in generators]
        reduced, _ = row_echelon_basis(candidates, width)
        if not result.extend(reduced):
            break
        frontier = reduced
    return result


def lie_closure_span(elements):
    elements = list(elements)
    if not elements:
        return None
    backend = backend_of(elements[0])
    vectors = [backend.lie_vector(g) for g in elements]
    return _close(RationalSpan(backend.lie_width), vectors, backend)


def lie_closure_dim(elements):
    """Hirsch length of the group generated by `elements`."""
    span = lie_closure_span(elements)
    return 0 if span is None else span.dim


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Report
@dataclass
class FiltrationLevel:
    """
    Attributes:
        index (int): j, 1-based.
        weight_value (WeightVec): w_j.
        generating_commutators (tuple): Commutators of weight exactly w_j with a nontrivial image.
        lie_dim (int): Hirsch length of G^w_j.
        rank (int): R^w_j = lie_dim(j) - lie_dim(j + 1).
    """

    index: int
    weight_value: object
    generating_commutators: tuple
    lie_dim: int
    rank: int

    def to_json(self):
        return {
            "index": self.index,
            "weight": [format_rational(c) for c in self.weight_value.coords],
            "lie_dim": self.lie_dim,
            "rank": self.rank,
            "generators": [str(c) for c in self.generating_commutators],
        }


@dataclass
class FiltrationReport:
    spec: object
    system: WeightSystem
    levels: list
    j_star: int
    D_components: tuple
    core: tuple
    j_w_table: tuple
    spans: list = field(repr=False, default_factory=list)

    @property
    def D(self):
        return self.D_components[0]

    @property
    def ranks(self):
        return tuple(level.rank for level in self.levels)

    @property
    def weight_values(self):
        return tuple(level.weight_value for level in self.levels)

    @property
    def hirsch_length(self):
        return sum(self.ranks)

    def span(self, j):
        """L_j (1-based); levels past j_star are the zero space."""
        if j <= len(self.spans):
            return self.spans[j - 1]
        return RationalSpan(self.spec.backend.lie_width)

    def to_json(self):
        data = {
            "group": self.spec.label,
            "weights": [[format_rational(c) for c in w.coords] for w in self.system.weights],
            "levels": [level.to_json() for level in self.levels],
            "ranks": list(self.ranks),
            "j_star": self.j_star,
            "D": format_rational(self.D),
            "D_components": [format_rational(d) for d in self.D_components],
            "core": list(self.core),
            "j_w": list(self.j_w_table),
        }
        if len(self.D_components) > 1:
            data.update({"D{}".format(i): format_rational(d) for i, d in enumerate(self.D_components, start=1)})
        return data


def filtration(spec, system):
    """Weight filtration of <S> for the weight system, truncated at j_star."""
    if system.k != spec.k:
        raise InvalidArgumentError("Weight system has {} weights for {} generators".format(system.k, spec.k))
    backend = spec.backend
    nilpotency_class = spec.nilpotency_class
    values = weight_value_sequence(system, nilpotency_class + 1)

    by_value = defaultdict(list)
    for c in enumerate_commutators(spec.k, nilpotency_class):
        g = eval_commutator(c, spec)
        if backend.is_identity(g):
            continue
        by_value[weight_of(c, system)].append((c, backend.lie_vector(g)))

    spans = [None] * len(values)
    current = RationalSpan(backend.lie_width)
    for j in reversed(range(len(values))):
        current = _close(current, [v for _, v in by_value[values[j]]], backend)
        spans[j] = current
        logger.debug("Level %d (weight %s): lie_dim %d", j + 1, values[j], current.dim)

    dims = [span.dim for span in spans] + [0]
    j_star = max((j + 1 for j in range(len(values)) if dims[j] > 0), default=0)
    levels = [
        FiltrationLevel(
            index=j + 1,
            weight_value=values[j],
            generating_commutators=tuple(c for c, _ in by_value[values[j]]),
            lie_dim=dims[j],
            rank=dims[j] - dims[j + 1],
        )
        for j in range(j_star)
    ]
    components = tuple(
        sum((level.weight_value[i] * level.rank for level in levels), Fraction(0))
        for i in range(system.dimension)
    )
    report = FiltrationReport(spec, system, levels, j_star, components, (), (), spans[:j_star])
    report.j_w_table = tuple(j_w(g, report) for g in spec.generators)
    report.core = core(spec, system, report)
    logger.info("Filtration of %s: ranks %s, D = %s", spec.label or spec.backend.name, report.ranks,
                ", ".join(format_rational(d) for d in components))
    return report


def D_exponent(report):
    return report.D_components


def j_w(g, report):
    """
    Largest j with log(g) in L_j, i.e. g^u in G^w_j for some u >= 1.

    The identity has no finite level and is reported as IDENTITY_LEVEL.
    """
    backend = report.spec.backend
    if not backend.owns(g):
        raise UnsupportedError("Element {} is not in the analysed group".format(g))
    vector = backend.lie_vector(g)
    if not any(vector):
        return IDENTITY_LEVEL
    for j in range(report.j_star, 0, -1):
        if report.span(j).contains(vector):
            return j
    raise UnsupportedError("Element {} lies outside the Lie algebra of <S>".format(g))


def core(spec, system, report):
    """1-based indices i with w(s_i) equal to the weight value of level j_w(s_i)."""
    selected = []
    for i, g in enumerate(spec.generators, start=1):
        level = j_w(g, report)
        if level != IDENTITY_LEVEL and report.levels[level - 1].weight_value == system[i - 1]:
            selected.append(i)
    return tuple(selected)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Lower Central Series
def lower_central_dimension(spec):
    """D(G) = sum_j j rank(G_j / G_{j+1}), from the equal-weight filtration."""
    report = filtration(spec, WeightSystem.scalar([1] * spec.k))
    return report.D


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Abelian Cross-Checks
@dataclass
class GreedySigma:
    """
    Attributes:
        indices (tuple): 1-based indices of the extracted generators.
        alphas (tuple): Their exponents.
        inverse_beta (Fraction): sum of 1/min(alpha, 2) over the extracted generators.
        gamma (int): Number of extracted generators with alpha exactly 2.
    """

    indices: tuple
    alphas: tuple
    inverse_beta: Fraction
    gamma: int

    @property
    def beta(self):
        return 1 / self.inverse_beta


def zd_greedy_sigma(vectors, a):
    """
    Picks generators in increasing alpha order, keeping those that raise the
    integer rank, until the rank reaches d.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if len(vectors) != len(a):
        raise InvalidArgumentError("Need one exponent per generator")
    d = len(vectors[0])
    alphas = [parse_rational(alpha) for alpha in a]
    order = sorted(range(len(vectors)), key=lambda i: (alphas[i], i))
    picked = []
    for i in order:
        if integer_rank([vectors[p] for p in picked] + [vectors[i]], d) > len(picked):
            picked.append(i)
        if len(picked) == d:
            break
    if len(picked) < d:
        raise InvalidArgumentError("Generators span a lattice of rank {} < {}".format(len(picked), d))
    inverse_beta = sum((1 / effective_alpha(alphas[i]) for i in picked), Fraction(0))
    gamma = sum(1 for i in picked if alphas[i] == 2)
    return GreedySigma(tuple(i + 1 for i in picked), tuple(alphas[i] for i in picked), inverse_beta, gamma)


@dataclass
class SmithLevel:
    weight_value: object
    lattice_rank: int
    invariant_factors: tuple
    rank: int


def smith_level_ranks(spec, system):
    """
    Per-level ranks of a Z^d spec from Smith normal forms of the level lattices
    spanned by the generators of weight >= w_j.
    """
    if not isinstance(spec.backend, ZdBackend):
        raise UnsupportedError("Smith-form ranks are only defined for the zd backend")
    values = weight_value_sequence(system, 2)
    d = spec.backend.d
    lattices = []
    for value in values:
        rows = [g.payload for g, w in zip(spec.generators, system.weights) if w >= value]
        lattices.append((value, invariant_factors(rows, d)))
    result = []
    for j, (value, factors) in enumerate(lattices):
        below = len(lattices[j + 1][1]) if j + 1 < len(lattices) else 0
        result.append(SmithLevel(value, len(factors), factors, len(factors) - below))
    return result


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Predicted Exponent
@dataclass
class Prediction:
    """
    Attributes:
        poly_exponent (Fraction): Power of n in the decay of mu^(n)(e).
        log_exponent (Fraction): Power of log n (or of n log n in the all-core-alpha=2 regime).
        regime (str): "pure-power", "all-core-α=2" or "mixed/unproven".
        upper_bound_only (bool): Only the upper bound is established.
        D_components (tuple): (D_1, D_2) of the log-corrected weight system.
        core (tuple): 1-based core indices.
    """

    poly_exponent: Fraction
    log_exponent: Fraction
    regime: str
    upper_bound_only: bool
    D_components: tuple
    core: tuple

    def to_json(self):
        return {
            "poly_exponent": format_rational(self.poly_exponent),
            "log_exponent": format_rational(self.log_exponent),
            "regime": self.regime,
            "upper_bound_only": self.upper_bound_only,
            "D1": format_rational(self.D_components[0]),
            "D2": format_rational(self.D_components[1]),
            "core": list(self.core),
        }


def predicted_return_exponent(spec, a, report=None):
    """
    Predicted decay of mu_{S,a}^(n)(e) with its regime label.

    `report` may carry the filtration for the two-dimensional system induced
    by a, when already computed.
    """
    if len(a) != spec.k:
        raise InvalidArgumentError("Need one exponent per generator: {} for k={}".format(len(a), spec.k))
    alphas = [parse_rational(alpha) for alpha in a]
    if report is None:
        report = filtration(spec, weights_from_alpha(alphas).weight_system)
    d1, d2 = report.D_components
    core_alphas = [alphas[i - 1] for i in report.core]
    if all(alpha < 2 for alpha in core_alphas):
        return Prediction(d1, Fraction(0), "pure-power", False, (d1, d2), report.core)
    if all(alpha == 2 for alpha in core_alphas):
        half = Fraction(lower_central_dimension(spec), 2)
        return Prediction(half, half, "all-core-α=2", False, (d1, d2), report.core)
    if all(alpha == math.inf or alpha > 2 for alpha in core_alphas):
        half = Fraction(lower_central_dimension(spec), 2)
        return Prediction(half, Fraction(0), "pure-power", False, (d1, d2), report.core)
    return Prediction(d1, d2, "mixed/unproven", True, (d1, d2), report.core)


__all__ = [
    "IDENTITY_LEVEL",
    "lie_closure_span",
    "lie_closure_dim",
    "FiltrationLevel",
    "FiltrationReport",
    "filtration",
    "D_exponent",
    "j_w",
    "core",
    "lower_central_dimension",
    "GreedySigma",
    "zd_greedy_sigma",
    "SmithLevel",
    "smith_level_ranks",
    "Prediction",
    "predicted_return_exponent",
]
