import collections
import math
from fractions import Fraction

import pytest

from nilwalk.algebra.commutators import (
    Letter,
    Word,
    bracket,
    build_word,
    canonical_form,
    enumerate_commutators,
    formal_commutators,
    free_reduce,
    group_word,
    involution,
    is_canonical,
    leaf,
    parse_commutator,
)
from nilwalk.algebra.weights import WeightSystem, weight_of, weight_value_sequence
from nilwalk.errors import InvalidArgumentError


@pytest.mark.parametrize("text", ["s1", "s3^-1", "[s2,s1]", "[s2,[s1^-1,s3]]", "[[s2,s1],[s3,s1]]"])
def test_parse_then_print(text):
    assert str(parse_commutator(text)) == text


def test_parse_ignores_whitespace():
    assert parse_commutator(" [ s2 , s1 ] ") == bracket(leaf(2), leaf(1))


@pytest.mark.parametrize("text", ["[s1,s2", "s0", "[s1;s2]", "s1]", "x1", ""])
def test_parse_rejects_bad_literals(text):
    with pytest.raises(InvalidArgumentError):
        parse_commutator(text)


def test_letter_domain():
    with pytest.raises(InvalidArgumentError):
        Letter(0)
    with pytest.raises(InvalidArgumentError):
        Letter(1, 2)


def test_order_is_length_first():
    short = parse_commutator("s3")
    long = parse_commutator("[s2,s1]")
    assert short < long
    assert leaf(1) < leaf(1, -1) < leaf(2)


def test_involution_is_an_involution():
    for c in formal_commutators(2, 3):
        assert involution(involution(c)) == c


def test_involution_swaps_children():
    c = parse_commutator("[s1,[s2,s1^-1]]")
    assert involution(c) == parse_commutator("[[s2,s1^-1],s1]")
    assert involution(leaf(2)) == leaf(2, -1)


def test_canonical_form():
    assert canonical_form(parse_commutator("[s2,s1]")) == (parse_commutator("[s2,s1]"), 1)
    assert canonical_form(parse_commutator("[s1,s2]")) == (parse_commutator("[s2,s1]"), -1)
    assert canonical_form(leaf(3, -1)) == (leaf(3), -1)
    fixed = parse_commutator("[s1,s1]")
    assert canonical_form(fixed) == (fixed, 1)


def test_build_word_strips_signs():
    assert build_word(parse_commutator("[s2^-1,[s1,s3^-1]]")) == (2, 1, 3)


def test_group_word_of_a_simple_bracket():
    word = group_word(parse_commutator("[s1,s2]"))
    assert word == (Letter(1, -1), Letter(2, -1), Letter(1), Letter(2))


def test_group_word_is_freely_reduced():
    word = group_word(parse_commutator("[s1,s1]"))
    assert word == ()
    for c in formal_commutators(2, 3):
        letters = group_word(c)
        assert free_reduce(letters) == letters


def test_enumeration_counts():
    # 4 signed letters; 16 brackets of length 2, 4 of them fixed by J
    commutators = enumerate_commutators(2, 2)
    assert len(commutators) == 2 + 6
    assert commutators == sorted(commutators)
    assert all(is_canonical(c) for c in commutators)


def test_enumeration_covers_every_class():
    canonical = set(enumerate_commutators(2, 3))
    for c in formal_commutators(2, 3):
        if involution(c) == c:
            continue
        representative, _ = canonical_form(c)
        assert representative in canonical


def test_enumeration_domain():
    with pytest.raises(InvalidArgumentError):
        enumerate_commutators(0, 2)
    with pytest.raises(InvalidArgumentError):
        enumerate_commutators(2, 0)


def test_word_merges_adjacent_terms():
    s1 = leaf(1)
    assert len(Word([(s1, 2), (s1, -2)])) == 0
    assert Word([(s1, 1), (s1, 2), (leaf(2), 1)]).terms == ((s1, 3), (leaf(2), 1))


def test_word_degrees():
    c = parse_commutator("[s2,s1]")
    word = Word([(c, 2), (leaf(1), 1), (involution(c), 1)])
    assert word.degree(c) == 3
    assert word.signed_degree(c) == 1
    assert word.degree(leaf(1)) == 1


def test_word_inverse():
    word = Word([(leaf(1), 2), (leaf(2), -1)])
    assert word.inverse().terms == ((leaf(2), 1), (leaf(1), -2))
    assert len(word * word.inverse()) == 0


def signed_trees(k, length):
    """Every bracketing of `length` signed letters, as nested tuples."""
    if length == 1:
        return [(i, s) for i in range(1, k + 1) for s in (1, -1)]
    return [
        (left, right)
        for split in range(1, length)
        for left in signed_trees(k, split)
        for right in signed_trees(k, length - split)
    ]


def as_commutator(tree):
    if isinstance(tree[0], int):
        return leaf(*tree)
    return bracket(as_commutator(tree[0]), as_commutator(tree[1]))


def tree_indices(tree):
    if isinstance(tree[0], int):
        return [tree[0]]
    return tree_indices(tree[0]) + tree_indices(tree[1])


@pytest.mark.parametrize("k,length", [(1, 3), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4)])
def test_enumeration_matches_brute_force(k, length):
    trees = signed_trees(k, length)
    assert len(trees) == math.comb(2 * length - 2, length - 1) // length * (2 * k) ** length
    moved = [t for t in trees if length == 1 or t[0] != t[1]]
    enumerated = [c for c in enumerate_commutators(k, length) if c.length == length]
    assert 2 * len(enumerated) == len(moved)
    assert set(enumerated) == {canonical_form(as_commutator(t))[0] for t in moved}


@pytest.mark.parametrize("k,max_len", [(2, 4), (3, 3)])
def test_weight_multiset_matches_brute_force(k, max_len):
    system = WeightSystem.scalar(["1", "3/2", "5/2"][:k])
    scalar = [Fraction(1), Fraction(3, 2), Fraction(5, 2)]
    expected = collections.Counter()
    for length in range(1, max_len + 1):
        for t in signed_trees(k, length):
            if length > 1 and t[0] == t[1]:
                continue
            if length == 1 and t[1] < 0:
                continue
            expected[sum(scalar[i - 1] for i in tree_indices(t))] += 1 if length == 1 else Fraction(1, 2)
    found = collections.Counter(weight_of(c, system)[0] for c in enumerate_commutators(k, max_len))
    assert found == expected
    assert sorted(set(found)) == [w[0] for w in weight_value_sequence(system, max_len)]
