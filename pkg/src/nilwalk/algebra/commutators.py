"""
Commutators Module

Formal commutators over the alphabet S^{±1} = {s_1^{±1}, ..., s_k^{±1}}. A formal
commutator is a bracket tree whose leaves are signed generator letters; it
exists independently of any group and acquires an image once the letters are
sent to group elements (see the groups module).

The module provides construction and parsing of commutators, the inversion
involution J (J(s_i^{±1}) = s_i^{∓1}, J([a,b]) = [b,a]), build-words and
group-words, the canonical enumeration of commutators modulo J, and words over
commutators together with their degree counts.

The total order used everywhere compares length first and then a serialized
encoding of the tree; it is deterministic and independent of any weight
system (weight-refining orders are obtained later by a stable sort).

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import functools
import re
from dataclasses import dataclass

from ..errors import InvalidArgumentError


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Letter
@dataclass(frozen=True, order=True)
class Letter:
    """
    A signed generator symbol s_index^{sign}.

    Attributes:
        index (int): Generator index, 1-based.
        sign (int): +1 or -1.
    """

    index: int
    sign: int = 1

    def __post_init__(self):
        if self.index < 1:
            raise InvalidArgumentError("Letter index must be >= 1, got " + str(self.index))
        if self.sign not in (1, -1):
            raise InvalidArgumentError("Letter sign must be +1 or -1, got " + str(self.sign))

    def inverse(self):
        return Letter(self.index, -self.sign)

    def __str__(self):
        return "s{}".format(self.index) if self.sign > 0 else "s{}^-1".format(self.index)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Formal Commutator
@functools.total_ordering
class FormalCommutator:
    """
    Binary bracket tree over signed letters.

    Instances are immutable. Equality and hashing follow the tree structure;
    ordering follows (length, serialized tree).
    """

    __slots__ = ("letter", "left", "right", "length", "_key", "_hash")

    def __init__(self, letter=None, left=None, right=None):
        if letter is not None:
            if left is not None or right is not None:
                raise InvalidArgumentError("A leaf carries no children")
            self.letter = letter
            self.left = None
            self.right = None
            self.length = 1
            self._key = (1, 0, letter.index, 0 if letter.sign > 0 else 1)
        else:
            if left is None or right is None:
                raise InvalidArgumentError("A bracket needs two children")
            self.letter = None
            self.left = left
            self.right = right
            self.length = left.length + right.length
            self._key = (self.length, 1, left._key, right._key)
        self._hash = hash(self._key)

    @property
    def is_leaf(self):
        return self.letter is not None

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        if not isinstance(other, FormalCommutator):
            return NotImplemented
        return self._key == other._key

    def __lt__(self, other):
        if not isinstance(other, FormalCommutator):
            return NotImplemented
        return self._key < other._key

    def __hash__(self):
        return self._hash

    def __str__(self):
        if self.is_leaf:
            return str(self.letter)
        return "[{},{}]".format(self.left, self.right)

    def __repr__(self):
        return "FormalCommutator({})".format(self)

    def leaves(self):
        """Letters left to right."""
        if self.is_leaf:
            return (self.letter,)
        return self.left.leaves() + self.right.leaves()

    def max_index(self):
        return max(letter.index for letter in self.leaves())


def leaf(index, sign=1):
    return FormalCommutator(letter=Letter(index, sign))


def bracket(left, right):
    return FormalCommutator(left=left, right=right)


def involution(c):
    """The map J: flips the sign of a leaf, swaps the children of a bracket."""
    if c.is_leaf:
        return FormalCommutator(letter=c.letter.inverse())
    return bracket(c.right, c.left)


def is_canonical(c):
    """c = s_i (positive leaf) or c = [a,b] with a ≻ b."""
    if c.is_leaf:
        return c.letter.sign > 0
    return c.left > c.right


def canonical_form(c):
    """
    Returns (representative, exponent) with c = representative^exponent formally.

    J-fixed brackets [a,a] are returned unchanged with exponent 1.
    """
    if is_canonical(c):
        return c, 1
    inverse = involution(c)
    if is_canonical(inverse):
        return inverse, -1
    return c, 1


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Words
def build_word(c):
    """Generator indices of the leaves, left to right, signs and brackets stripped."""
    return tuple(letter.index for letter in c.leaves())


def invert_word(letters):
    return tuple(letter.inverse() for letter in reversed(letters))


def free_reduce(letters):
    stack = []
    for letter in letters:
        if stack and stack[-1].index == letter.index and stack[-1].sign == -letter.sign:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@functools.lru_cache(maxsize=65536)
def group_word(c):
    """
    Expansion of c over S^{±1} using [c1,c2] = c1^{-1} c2^{-1} c1 c2, freely reduced.
    """
    if c.is_leaf:
        return (c.letter,)
    first = group_word(c.left)
    second = group_word(c.right)
    return free_reduce(invert_word(first) + invert_word(second) + first + second)


class Word:
    """
    Ordered sequence of (FormalCommutator, exponent) pairs.

    Adjacent occurrences of the same commutator are merged and zero exponents
    dropped on construction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = []
        for commutator, exponent in terms:
            exponent = int(exponent)
            if merged and merged[-1][0] == commutator:
                merged[-1] = (commutator, merged[-1][1] + exponent)
                if merged[-1][1] == 0:
                    merged.pop()
            elif exponent != 0:
                merged.append((commutator, exponent))
        self.terms = tuple(merged)

    @classmethod
    def from_letters(cls, letters):
        return cls((leaf(letter.index), letter.sign) for letter in letters)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, Word) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __mul__(self, other):
        return Word(self.terms + other.terms)

    def inverse(self):
        return Word((c, -e) for c, e in reversed(self.terms))

    def degree(self, c):
        """deg_c: number of occurrences of c^{±1} (J(c) counts as c^{-1})."""
        inverse = involution(c)
        return sum(abs(e) for term, e in self.terms if term == c or term == inverse)

    def signed_degree(self, c):
        """deg*_c: occurrences of c minus occurrences of c^{-1}."""
        inverse = involution(c)
        total = 0
        for term, e in self.terms:
            if term == c:
                total += e
            elif term == inverse:
                total -= e
        return total

    def __str__(self):
        return " ".join("{}^{}".format(c, e) if e != 1 else str(c) for c, e in self.terms)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Enumeration
@functools.lru_cache(maxsize=None)
def formal_commutators(k, length):
    """All formal commutators of exactly the given length over k signed generators."""
    if length == 1:
        return tuple(leaf(i, s) for i in range(1, k + 1) for s in (1, -1))
    result = []
    for left_length in range(1, length):
        for left in formal_commutators(k, left_length):
            for right in formal_commutators(k, length - left_length):
                result.append(bracket(left, right))
    return tuple(result)


@functools.lru_cache(maxsize=None)
def _canonical_of_length(k, length):
    if length == 1:
        return tuple(leaf(i) for i in range(1, k + 1))
    found = [c for c in formal_commutators(k, length) if c.left > c.right]
    return tuple(sorted(found))


def enumerate_commutators(k, max_len):
    """
    Canonical representatives modulo J of all formal commutators of length
    <= max_len, sorted by the commutator order.
    """
    if k < 1:
        raise InvalidArgumentError("Alphabet size must be >= 1, got " + str(k))
    if max_len < 1:
        raise InvalidArgumentError("max_len must be >= 1, got " + str(max_len))
    result = []
    for length in range(1, max_len + 1):
        result.extend(_canonical_of_length(k, length))
    return result


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Parsing
_TOKEN = re.compile(r"s(\d+)(\^(-?1))?")


def parse_commutator(text):
    """
    Parses `s3`, `s3^-1` and nested `[c1,c2]`; whitespace is ignored.
    """
    compact = "".join(text.split())
    commutator, position = _parse(compact, 0)
    if position != len(compact):
        raise InvalidArgumentError("Trailing characters in commutator literal: " + repr(text))
    return commutator


def _parse(text, position):
    if position >= len(text):
        raise InvalidArgumentError("Unexpected end of commutator literal: " + repr(text))
    if text[position] == "[":
        left, position = _parse(text, position + 1)
        if position >= len(text) or text[position] != ",":
            raise InvalidArgumentError("Expected ',' in commutator literal: " + repr(text))
        right, position = _parse(text, position + 1)
        if position >= len(text) or text[position] != "]":
            raise InvalidArgumentError("Expected ']' in commutator literal: " + repr(text))
        return bracket(left, right), position + 1
    match = _TOKEN.match(text, position)
    if not match:
        raise InvalidArgumentError("Bad letter in commutator literal: " + repr(text))
    sign = -1 if match.group(3) == "-1" else 1
    return leaf(int(match.group(1)), sign), match.end()


__all__ = [
    "Letter",
    "FormalCommutator",
    "Word",
    "leaf",
    "bracket",
    "involution",
    "is_canonical",
    "canonical_form",
    "build_word",
    "group_word",
    "invert_word",
    "free_reduce",
    "formal_commutators",
    "enumerate_commutators",
    "parse_commutator",
]
