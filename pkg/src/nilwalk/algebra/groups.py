"""
Groups Module

Exact arithmetic for the supported group families:

    zd              Z^d, integer vectors.
    unitriangular   finitely generated subgroups of U(d), upper unitriangular
                    integer matrices with arbitrary-precision entries.
    free_nilpotent  N(k, l) in Hall coordinates; multiplication is delegated to
                    the collection module.

Each backend also exposes a faithful rational Lie algebra image of its
elements (the Mal'cev logarithm flattened to a vector) together with the Lie
bracket on those vectors. The filtration and geometry modules only ever talk
to a group through that interface.

A GroupSpec fixes a backend, the generating tuple S = (s_1, ..., s_k) and an
optional declared nilpotency class.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import functools
import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .._utils import ensure_iterable, generalized_binomial
from ..errors import ConfigError, InvalidArgumentError, NilwalkError, UnsupportedError
from . import collection
from .commutators import bracket as formal_bracket, leaf

logger = logging.getLogger(__name__)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Elements
@dataclass(frozen=True)
class GroupElement:
    """
    Backend-tagged exact element.

    Attributes:
        backend (str): "zd", "unitriangular" or "free_nilpotent".
        shape (tuple): Backend parameters, (d,) or (k, l).
        payload (tuple): Integer vector, matrix rows, or Hall exponents.
    """

    backend: str
    shape: tuple
    payload: tuple

    def __str__(self):
        return "{}{}:{}".format(self.backend, self.shape, self.payload)


@dataclass(frozen=True)
class LieElement:
    """Strictly upper triangular d x d matrix of Fractions."""

    d: int
    entries: tuple

    def flat(self):
        return tuple(self.entries[i][j] for i in range(self.d) for j in range(i + 1, self.d))

    @classmethod
    def from_flat(cls, d, values):
        rows = [[Fraction(0)] * d for _ in range(d)]
        values = iter(values)
        for i in range(d):
            for j in range(i + 1, d):
                rows[i][j] = Fraction(next(values))
        return cls(d, tuple(tuple(row) for row in rows))

    def bracket(self, other):
        x = _as_array(self.entries)
        y = _as_array(other.entries)
        return LieElement(self.d, _as_rows(x @ y - y @ x))

    def is_zero(self):
        return not any(self.flat())


def _as_array(rows):
    return np.array(rows, dtype=object)


def _as_rows(array):
    return tuple(tuple(row) for row in array.tolist())


def _identity_rows(d, one=1):
    return tuple(tuple(one if i == j else 0 for j in range(d)) for i in range(d))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Backends
class GroupBackend:
    """
    Common interface of the group backends.

    Attributes:
        name (str): Backend tag carried by every element.
        lie_width (int): Length of the Lie algebra vectors.
        class_bound (int): Nilpotency class of the ambient group.
    """

    name = None

    @property
    def shape(self):
        raise NotImplementedError

    def element(self, payload):
        return GroupElement(self.name, self.shape, self.validate(payload))

    def owns(self, g):
        return isinstance(g, GroupElement) and g.backend == self.name and g.shape == self.shape

    def check(self, *elements):
        for g in elements:
            if not self.owns(g):
                raise InvalidArgumentError("Element {} does not belong to backend {}{}".format(g, self.name, self.shape))

    def bracket(self, g, h):
        """g^-1 h^-1 g h."""
        return self.multiply(self.multiply(self.invert(g), self.invert(h)), self.multiply(g, h))

    def is_identity(self, g):
        return g == self.identity()


@dataclass(frozen=True)
class ZdBackend(GroupBackend):
    d: int
    name = "zd"

    @property
    def shape(self):
        return (self.d,)

    @property
    def lie_width(self):
        return self.d

    @property
    def class_bound(self):
        return 1

    def validate(self, payload):
        payload = tuple(int(x) for x in payload)
        if len(payload) != self.d:
            raise InvalidArgumentError("Z^{} element needs {} entries, got {}".format(self.d, self.d, len(payload)))
        return payload

    def identity(self):
        return GroupElement(self.name, self.shape, (0,) * self.d)

    def multiply(self, g, h):
        self.check(g, h)
        return GroupElement(self.name, self.shape, tuple(a + b for a, b in zip(g.payload, h.payload)))

    def invert(self, g):
        self.check(g)
        return GroupElement(self.name, self.shape, tuple(-a for a in g.payload))

    def power(self, g, n):
        self.check(g)
        return GroupElement(self.name, self.shape, tuple(n * a for a in g.payload))

    def bracket(self, g, h):
        self.check(g, h)
        return self.identity()

    def lie_vector(self, g):
        self.check(g)
        return tuple(Fraction(a) for a in g.payload)

    def lie_bracket(self, u, v):
        return (Fraction(0),) * self.d


@dataclass(frozen=True)
class UnitriangularBackend(GroupBackend):
    d: int
    name = "unitriangular"

    @property
    def shape(self):
        return (self.d,)

    @property
    def lie_width(self):
        return self.d * (self.d - 1) // 2

    @property
    def class_bound(self):
        return max(self.d - 1, 1)

    def validate(self, payload):
        rows = tuple(tuple(int(x) for x in row) for row in payload)
        if len(rows) != self.d or any(len(row) != self.d for row in rows):
            raise InvalidArgumentError("Expected a {0}x{0} matrix".format(self.d))
        for i in range(self.d):
            if rows[i][i] != 1:
                raise InvalidArgumentError("Diagonal entries must be 1")
            if any(rows[i][j] for j in range(i)):
                raise InvalidArgumentError("Entries below the diagonal must be 0")
        return rows

    def identity(self):
        return GroupElement(self.name, self.shape, _identity_rows(self.d))

    def multiply(self, g, h):
        self.check(g, h)
        return GroupElement(self.name, self.shape, _as_rows(_as_array(g.payload) @ _as_array(h.payload)))

    def _nilpotent_powers(self, g):
        n = _as_array(g.payload) - _as_array(_identity_rows(self.d))
        powers = [n]
        for _ in range(self.d - 2):
            powers.append(powers[-1] @ n)
        return powers

    def power(self, g, n):
        """(I + N)^n = sum_p C(n, p) N^p, exact for every integer n."""
        self.check(g)
        result = _as_array(_identity_rows(self.d))
        for p, npow in enumerate(self._nilpotent_powers(g), start=1):
            coefficient = generalized_binomial(n, p)
            if coefficient:
                result = result + coefficient * npow
        return GroupElement(self.name, self.shape, _as_rows(result))

    def invert(self, g):
        return self.power(g, -1)

    def log(self, g):
        """log(I + N) = N - N^2/2 + ... (terminates since N^d = 0)."""
        self.check(g)
        result = np.zeros((self.d, self.d), dtype=object)
        for p, npow in enumerate(self._nilpotent_powers(g), start=1):
            result = result + npow * Fraction((-1) ** (p + 1), p)
        return LieElement(self.d, tuple(tuple(Fraction(x) for x in row) for row in result.tolist()))

    def exp(self, x):
        """exp(X) = sum_p X^p / p!; the result must be an integer matrix."""
        if x.d != self.d:
            raise InvalidArgumentError("Lie element of size {} for U({})".format(x.d, self.d))
        xa = _as_array(x.entries)
        term = _as_array(_identity_rows(self.d, Fraction(1)))
        result = term
        for p in range(1, self.d):
            term = (term @ xa) * Fraction(1, p)
            result = result + term
        rows = []
        for row in result.tolist():
            entries = [Fraction(v) for v in row]
            if any(v.denominator != 1 for v in entries):
                raise InvalidArgumentError("exp does not land in the integer group")
            rows.append(tuple(int(v) for v in entries))
        return GroupElement(self.name, self.shape, tuple(rows))

    def lie_vector(self, g):
        return self.log(g).flat()

    def lie_bracket(self, u, v):
        return LieElement.from_flat(self.d, u).bracket(LieElement.from_flat(self.d, v)).flat()


@dataclass(frozen=True)
class FreeNilpotentBackend(GroupBackend):
    k: int
    l: int
    name = "free_nilpotent"

    @property
    def shape(self):
        return (self.k, self.l)

    @property
    def lie_width(self):
        return sum(self.k ** m for m in range(1, self.l + 1))

    @property
    def class_bound(self):
        return self.l

    @property
    def basis(self):
        return collection.hall_basis(self.k, self.l)

    def validate(self, payload):
        return collection.NormalForm(self.k, self.l, tuple(payload)).exponents

    def normal_form(self, g):
        self.check(g)
        return collection.NormalForm(self.k, self.l, g.payload)

    def _wrap(self, nf):
        return GroupElement(self.name, self.shape, nf.exponents)

    def identity(self):
        return self._wrap(collection.NormalForm.identity(self.k, self.l))

    def generator(self, i):
        exponents = [0] * len(self.basis)
        exponents[i - 1] = 1
        return GroupElement(self.name, self.shape, tuple(exponents))

    def multiply(self, g, h):
        return self._wrap(collection.nf_multiply(self.normal_form(g), self.normal_form(h)))

    def invert(self, g):
        return self._wrap(collection.nf_inverse(self.normal_form(g)))

    def power(self, g, n):
        return self._wrap(collection.nf_power(self.normal_form(g), n))

    def lie_vector(self, g):
        return tuple(Fraction(v) for v in collection.magnus_image(self.normal_form(g)).log().vector())

    def lie_bracket(self, u, v):
        x = collection.TruncatedSeries.from_vector(self.k, self.l, u)
        y = collection.TruncatedSeries.from_vector(self.k, self.l, v)
        return tuple(Fraction(c) for c in x.lie_bracket(y).vector())


_BACKENDS = {
    "zd": ZdBackend,
    "unitriangular": UnitriangularBackend,
    "free_nilpotent": FreeNilpotentBackend,
}


@functools.lru_cache(maxsize=None)
def backend_for(name, shape):
    if name not in _BACKENDS:
        raise UnsupportedError("Unknown group backend: " + str(name))
    return _BACKENDS[name](*shape)


def backend_of(g):
    return backend_for(g.backend, g.shape)


def _same_backend(g, h):
    if g.backend != h.backend or g.shape != h.shape:
        raise InvalidArgumentError("Backend mismatch: {}{} vs {}{}".format(g.backend, g.shape, h.backend, h.shape))
    return backend_of(g)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Group Law
def multiply(g, h):
    return _same_backend(g, h).multiply(g, h)


def invert(g):
    return backend_of(g).invert(g)


def power(g, n):
    return backend_of(g).power(g, n)


def bracket(g, h):
    """g^-1 h^-1 g h."""
    return _same_backend(g, h).bracket(g, h)


def log_element(g):
    """Mal'cev logarithm of a unitriangular element."""
    backend = backend_of(g)
    if not isinstance(backend, UnitriangularBackend):
        raise UnsupportedError("log_element needs the unitriangular backend, got " + g.backend)
    return backend.log(g)


def exp_element(x):
    return backend_for("unitriangular", (x.d,)).exp(x)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Group Spec
@dataclass(frozen=True)
class GroupSpec:
    """
    A group given by a backend and a generating tuple.

    Attributes:
        backend (GroupBackend): Arithmetic of the ambient group.
        generators (tuple): S = (s_1, ..., s_k) as GroupElements.
        declared_class (int): Optional nilpotency class bound of <S>.
        label (str): Free-form description, carried into reports.
    """

    backend: GroupBackend
    generators: tuple
    declared_class: int = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise InvalidArgumentError("A group spec needs at least one generator")
        self.backend.check(*self.generators)
        if self.declared_class is not None and self.declared_class < 1:
            raise InvalidArgumentError("Declared class must be >= 1")

    @property
    def k(self):
        return len(self.generators)

    @property
    def nilpotency_class(self):
        if self.declared_class is not None:
            return min(self.declared_class, self.backend.class_bound)
        return self.backend.class_bound

    def identity(self):
        return self.backend.identity()

    def without(self, indices):
        """This group spec restricted to the generators not in `indices` (1-based)."""
        dropped = set(indices)
        kept = tuple(g for i, g in enumerate(self.generators, start=1) if i not in dropped)
        return GroupSpec(self.backend, kept, self.declared_class, self.label)


def identity(spec):
    return spec.identity()


@functools.lru_cache(maxsize=200000)
def eval_commutator(c, spec):
    """Image of the formal commutator c under s_i -> S[i]."""
    if c.max_index() > spec.k:
        raise InvalidArgumentError("Commutator {} uses a letter outside 1..{}".format(c, spec.k))
    if c.length > spec.nilpotency_class:
        return spec.identity()
    if c.is_leaf:
        g = spec.generators[c.letter.index - 1]
        return g if c.letter.sign > 0 else spec.backend.invert(g)
    return spec.backend.bracket(eval_commutator(c.left, spec), eval_commutator(c.right, spec))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Constructors
def zd_spec(vectors, label=""):
    vectors = [tuple(int(x) for x in v) for v in vectors]
    backend = ZdBackend(len(vectors[0]))
    return GroupSpec(backend, tuple(backend.element(v) for v in vectors), label=label)


def unitriangular_elementary(d, i, j, value=1):
    """I + value * E_{i,j} (1-based, i < j)."""
    if not 1 <= i < j <= d:
        raise InvalidArgumentError("Elementary matrix needs 1 <= i < j <= d, got ({}, {}) for d={}".format(i, j, d))
    rows = [list(row) for row in _identity_rows(d)]
    rows[i - 1][j - 1] = value
    return UnitriangularBackend(d).element(rows)


def heisenberg_generators():
    """(X, Y, Z) = (E12, E23, E13) in U(3); [X, Y] = Z."""
    return tuple(unitriangular_elementary(3, i, j) for i, j in ((1, 2), (2, 3), (1, 3)))


def unitriangular_spec(d, generators=None, declared_class=None, label=""):
    """U(d) with the given generators, by default E_{i,i+1}."""
    if generators is None:
        generators = tuple(unitriangular_elementary(d, i, i + 1) for i in range(1, d))
    return GroupSpec(UnitriangularBackend(d), tuple(generators), declared_class, label or "U({})".format(d))


def filiform_generators(l):
    """
    (u_1, ..., u_l, t) in U(l + 1) with [u_i, u_j] = 1, [u_i, t] = u_{i+1} and
    [u_l, t] = 1.

    Row l - i carries u_i and the last row/column is affine; t acts by the
    inverse of I + shift on the first l coordinates.
    """
    if l < 1:
        raise InvalidArgumentError("Filiform class must be >= 1")
    d = l + 1
    us = tuple(unitriangular_elementary(d, l - i + 1, d) for i in range(1, l + 1))
    rows = [list(row) for row in _identity_rows(d)]
    for a in range(l):
        for p in range(1, l - a):
            rows[a][a + p] = (-1) ** p
    t = UnitriangularBackend(d).element(rows)
    return us, t


def filiform_spec(l, extra=()):
    """S = (u_1, t) plus optional u_j (1-based indices in `extra`)."""
    us, t = filiform_generators(l)
    generators = (us[0], t) + tuple(us[j - 1] for j in extra)
    return GroupSpec(UnitriangularBackend(l + 1), generators, l, "filiform({})".format(l))


def free_nilpotent_spec(k, l):
    backend = FreeNilpotentBackend(k, l)
    return GroupSpec(backend, tuple(backend.generator(i) for i in range(1, k + 1)), l, "N({},{})".format(k, l))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Regular Representation
@functools.lru_cache(maxsize=None)
def _word_positions(k, l):
    words = [w for m in range(l, -1, -1) for w in itertools.product(range(1, k + 1), repeat=m)]
    return words, {w: i for i, w in enumerate(words)}


def regular_matrix(series):
    """Matrix of f -> series * f on words of length <= l, longest words first."""
    words, position = _word_positions(series.k, series.depth)
    size = len(words)
    rows = [[0] * size for _ in range(size)]
    for w in words:
        column = position[w]
        for m in range(series.depth - len(w) + 1):
            for v, value in series.parts[m].items():
                rows[position[v + w]][column] += value
    return UnitriangularBackend(size).element(rows)


def regular_representation(k, l):
    """Faithful unitriangular image of N(k, l) through the truncated Magnus algebra."""
    images = tuple(
        regular_matrix(collection.TruncatedSeries.generator(k, l, i)) for i in range(1, k + 1)
    )
    size = len(_word_positions(k, l)[0])
    return GroupSpec(UnitriangularBackend(size), images, l, "regular N({},{})".format(k, l))


def hall_to_regular_matrix(g):
    backend = backend_of(g)
    return regular_matrix(collection.magnus_image(backend.normal_form(g)))


@functools.lru_cache(maxsize=None)
def _check_class(images, l):
    k = images.k
    for indices in itertools.product(range(1, k + 1), repeat=l + 1):
        c = leaf(indices[0])
        for i in indices[1:]:
            c = formal_bracket(c, leaf(i))
        g = images.generators[indices[0] - 1]
        for i in indices[1:]:
            g = images.backend.bracket(g, images.generators[i - 1])
        if not images.backend.is_identity(g):
            raise InvalidArgumentError("Images have class > {}: {} is nontrivial".format(l, c))


def project_hall_to_matrix(h, images):
    """
    Homomorphic image of h in N(k, l) under s_i -> images.generators[i].
    """
    backend = backend_of(h)
    if not isinstance(backend, FreeNilpotentBackend):
        raise UnsupportedError("project_hall_to_matrix needs a free_nilpotent element")
    if images.k != backend.k:
        raise InvalidArgumentError("Need {} generator images, got {}".format(backend.k, images.k))
    _check_class(images, backend.l)
    target = GroupSpec(images.backend, images.generators, backend.l, images.label)
    result = target.identity()
    for c, x in zip(backend.basis, h.payload):
        if x:
            result = target.backend.multiply(result, target.backend.power(eval_commutator(c, target), x))
    return result


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# JSON
_ELEMENTARY = re.compile(r"^E(?:(\d)(\d)|(\d+),(\d+))(?:\^(-?\d+))?$")


def element_from_json(backend, data):
    """
    Backend literal: integer vector (zd, free_nilpotent), matrix as nested
    rows or flat row-major list, or an elementary literal (unitriangular):
    "E13^5", or "E1,10" once an index has two digits.
    """
    try:
        if isinstance(backend, UnitriangularBackend):
            if isinstance(data, str):
                match = _ELEMENTARY.match(data.replace(" ", ""))
                if not match:
                    raise ConfigError("Bad elementary matrix literal: " + repr(data))
                i, j = (match.group(1), match.group(2)) if match.group(1) else (match.group(3), match.group(4))
                value = int(match.group(5)) if match.group(5) else 1
                return unitriangular_elementary(backend.d, int(i), int(j), value)
            values = list(data)
            if values and not isinstance(values[0], (list, tuple)):
                if len(values) != backend.d ** 2:
                    raise ConfigError("Flat matrix literal needs {} entries".format(backend.d ** 2))
                values = [values[i * backend.d:(i + 1) * backend.d] for i in range(backend.d)]
            return backend.element([[int(x) for x in row] for row in values])
        return backend.element([int(x) for x in data])
    except NilwalkError:
        raise
    except (TypeError, ValueError) as error:
        raise ConfigError("Malformed element literal {!r}: {}".format(data, error)) from None


def element_to_json(g):
    if g.backend == "unitriangular":
        return [list(row) for row in g.payload]
    return list(g.payload)


def _optional_int(value):
    return None if value is None else int(value)


def group_spec_from_json(data):
    """
    {"backend": "zd" | "unitriangular" | "free_nilpotent" | "filiform", "d" | "k" | "l",
     "class", "generators"}.
    """
    if not isinstance(data, dict) or "backend" not in data:
        raise ConfigError("Group spec needs a 'backend' field")
    name = data["backend"]
    try:
        if name == "zd":
            generators = data["generators"]
            spec = zd_spec(generators, label="Z^{}".format(len(generators[0])))
            if "d" in data and int(data["d"]) != spec.backend.d:
                raise ConfigError("Generators do not match d={}".format(data["d"]))
            return spec
        if name == "unitriangular":
            d = int(data["d"])
            backend = UnitriangularBackend(d)
            generators = data.get("generators", "standard")
            if generators == "standard":
                return unitriangular_spec(d, declared_class=_optional_int(data.get("class")))
            elements = tuple(element_from_json(backend, g) for g in ensure_iterable(generators))
            return unitriangular_spec(d, elements, _optional_int(data.get("class")))
        if name == "free_nilpotent":
            k, l = int(data["k"]), int(data["class"])
            spec = free_nilpotent_spec(k, l)
            if "generators" in data:
                elements = tuple(element_from_json(spec.backend, g) for g in data["generators"])
                spec = GroupSpec(spec.backend, elements, l, spec.label)
            return spec
        if name == "filiform":
            return filiform_spec(int(data["l"]), tuple(data.get("extra", ())))
    except NilwalkError:
        raise
    except KeyError as missing:
        raise ConfigError("Group spec is missing field {}".format(missing)) from None
    except (TypeError, IndexError, ValueError) as error:
        raise ConfigError("Malformed group spec: {}".format(error)) from None
    raise UnsupportedError("Unknown group backend: " + str(name))


def group_spec_to_json(spec):
    backend = spec.backend
    data = {"backend": backend.name, "generators": [element_to_json(g) for g in spec.generators]}
    if isinstance(backend, FreeNilpotentBackend):
        data.update({"k": backend.k, "class": backend.l})
    else:
        data["d"] = backend.shape[0]
    if spec.declared_class is not None:
        data["class"] = spec.declared_class
    return data


__all__ = [
    "GroupElement",
    "LieElement",
    "GroupBackend",
    "ZdBackend",
    "UnitriangularBackend",
    "FreeNilpotentBackend",
    "GroupSpec",
    "backend_for",
    "backend_of",
    "multiply",
    "invert",
    "power",
    "bracket",
    "identity",
    "log_element",
    "exp_element",
    "eval_commutator",
    "zd_spec",
    "unitriangular_elementary",
    "heisenberg_generators",
    "unitriangular_spec",
    "filiform_generators",
    "filiform_spec",
    "free_nilpotent_spec",
    "regular_matrix",
    "regular_representation",
    "hall_to_regular_matrix",
    "project_hall_to_matrix",
    "element_from_json",
    "element_to_json",
    "group_spec_from_json",
    "group_spec_to_json",
]
