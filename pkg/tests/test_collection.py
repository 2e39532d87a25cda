from fractions import Fraction

import numpy as np
import pytest

from nilwalk.algebra.collection import (
    NormalForm,
    TruncatedSeries,
    collect,
    free_nilpotent_dimension,
    hall_basis,
    hirsch_length,
    magnus_image,
    multigraded_witt_number,
    nf_inverse,
    nf_multiply,
    nf_power,
    normal_form_of_series,
    predicted_free_nilpotent_exponent,
    series_of_commutator,
    witt_number,
)
from nilwalk.algebra.commutators import Word, leaf, parse_commutator
from nilwalk.algebra.groups import (
    FreeNilpotentBackend,
    heisenberg_generators,
    multiply,
    power,
    project_hall_to_matrix,
    regular_representation,
    unitriangular_spec,
)
from nilwalk.errors import InvalidArgumentError, NotInSpanError


@pytest.mark.parametrize("k,l,counts", [
    (2, 2, (2, 1)),
    (2, 3, (2, 1, 2)),
    (3, 2, (3, 3)),
    (2, 4, (2, 1, 2, 3)),
    (3, 3, (3, 3, 8)),
])
def test_witt_numbers_match_hall_basis(k, l, counts):
    assert tuple(witt_number(k, m) for m in range(1, l + 1)) == counts
    assert hall_basis(k, l).counts == counts
    assert hirsch_length(k, l) == sum(counts)


def test_hall_basis_of_n23():
    assert hall_basis(2, 3).to_json() == ["s1", "s2", "[s2,s1]", "[[s2,s1],s1]", "[[s2,s1],s2]"]


def test_free_nilpotent_dimension():
    assert free_nilpotent_dimension(2, 3) == 10
    assert free_nilpotent_dimension(2, 2) == 4
    assert free_nilpotent_dimension(3, 2) == 9


def test_multigraded_witt_numbers():
    assert multigraded_witt_number((2, 1)) == 1
    assert multigraded_witt_number((1, 1)) == 1
    assert multigraded_witt_number((2, 0)) == 0
    assert multigraded_witt_number((2, 2)) == 1
    assert multigraded_witt_number((1, 1, 1)) == 2


def test_predicted_free_nilpotent_exponent():
    assert predicted_free_nilpotent_exponent(2, 3, ["1", "1"]) == 10
    # weights (1, 1/2): lengths contribute 3/2, 3/2 and 5/2 + 2
    assert predicted_free_nilpotent_exponent(2, 3, ["1", "2"]) == Fraction(15, 2)
    with pytest.raises(InvalidArgumentError):
        predicted_free_nilpotent_exponent(2, 3, ["1"])


@pytest.mark.parametrize("a,b,c", [(1, 1, 1), (2, 3, -1), (-4, 5, 2), (0, 7, 3)])
def test_collect_moves_generators_past_each_other(a, b, c):
    word = Word([(leaf(1), a), (leaf(2), b), (leaf(1), c)])
    assert collect(word, 2, 2).exponents == (a + c, b, b * c)


def test_collect_drops_long_brackets():
    word = Word([(parse_commutator("[[s2,s1],s1]"), 4)])
    assert collect(word, 2, 2).is_identity()


def test_collect_rejects_foreign_letters():
    with pytest.raises(InvalidArgumentError):
        collect(Word([(leaf(3), 1)]), 2, 2)


@pytest.mark.parametrize("l,images", [
    (2, unitriangular_spec(3, heisenberg_generators()[:2])),
    (3, regular_representation(2, 3)),
])
def test_collect_agrees_with_matrix_images(l, images):
    backend = FreeNilpotentBackend(2, l)
    rng = np.random.default_rng(2024 + l)
    for _ in range(1000):
        length = int(rng.integers(1, 8))
        indices = rng.integers(1, 3, size=length)
        exponents = rng.integers(-3, 4, size=length)
        word = Word([(leaf(int(i)), int(e)) for i, e in zip(indices, exponents)])
        expected = images.identity()
        for i, e in zip(indices, exponents):
            expected = multiply(expected, power(images.generators[int(i) - 1], int(e)))
        collected = backend.element(collect(word, 2, l).exponents)
        assert project_hall_to_matrix(collected, images) == expected


def test_normal_form_group_law():
    rng = np.random.default_rng(8)
    for _ in range(10):
        u, v, w = (NormalForm(2, 3, tuple(rng.integers(-3, 4, size=5))) for _ in range(3))
        assert nf_multiply(nf_multiply(u, v), w) == nf_multiply(u, nf_multiply(v, w))
        assert nf_multiply(u, nf_inverse(u)).is_identity()
        assert nf_power(u, 3) == nf_multiply(u, nf_multiply(u, u))


def test_normal_form_of_series_reads_back_magnus_images():
    nf = NormalForm(3, 2, (1, -2, 0, 4, -1, 7))
    assert normal_form_of_series(magnus_image(nf)) == nf


def test_normal_form_length_is_checked():
    with pytest.raises(InvalidArgumentError):
        NormalForm(2, 2, (1, 2))
    with pytest.raises(InvalidArgumentError):
        nf_multiply(NormalForm.identity(2, 2), NormalForm.identity(2, 3))


def test_non_group_series_is_rejected():
    series = magnus_image(NormalForm.identity(2, 2)).scale(2)
    with pytest.raises(NotInSpanError):
        normal_form_of_series(series)


COMMUTATOR_LETTERS = [
    "s1", "s2", "s3", "[s2,s1]", "[s3,s1]", "[s3,s2]", "[[s2,s1],s1]", "[[s3,s2],s2]",
    "[s1,s2]", "[s1,[s2,s1]]", "[[s1,s3],s2]", "[[s2,s1],[s3,s1]]",
]


def test_collect_agrees_with_the_magnus_normal_form():
    k, l = 3, 3
    letters = [parse_commutator(text) for text in COMMUTATOR_LETTERS]
    rng = np.random.default_rng(31)
    for _ in range(40):
        length = int(rng.integers(1, 7))
        choices = rng.integers(0, len(letters), size=length)
        exponents = rng.integers(-3, 4, size=length)
        word = Word([(letters[int(i)], int(e)) for i, e in zip(choices, exponents)])
        series = TruncatedSeries.one(k, l)
        for i, e in zip(choices, exponents):
            series = series * series_of_commutator(letters[int(i)], k, l).power(int(e))
        assert collect(word, k, l) == normal_form_of_series(series)


@pytest.mark.parametrize("k,l", [(2, 2), (2, 3), (3, 3)])
def test_collecting_a_normal_form_is_idempotent(k, l):
    rng = np.random.default_rng(k * 10 + l)
    for _ in range(20):
        nf = NormalForm(k, l, tuple(int(x) for x in rng.integers(-5, 6, size=hirsch_length(k, l))))
        assert collect(nf.word(), k, l) == nf
        word = Word([(leaf(int(i)), int(e)) for i, e in zip(rng.integers(1, k + 1, size=6), rng.integers(-4, 5, size=6))])
        once = collect(word, k, l)
        assert collect(once.word(), k, l) == once


@pytest.mark.parametrize("l", [2, 3])
@pytest.mark.parametrize("r", [2, 4, 8])
def test_collected_exponents_grow_with_the_commutator_length(l, r):
    basis = hall_basis(2, l)
    rng = np.random.default_rng(100 * l + r)
    letters = 6
    for _ in range(20):
        signs = rng.choice([-1, 1], size=letters)
        word = Word([(leaf(1 + i % 2), int(s) * r) for i, s in enumerate(signs)])
        exponents = collect(word, 2, l).exponents
        for c, x in zip(basis.commutators, exponents):
            assert abs(x) <= 4 * (letters * r) ** c.length / letters
    commutator = Word([(leaf(1), r), (leaf(2), r), (leaf(1), -r), (leaf(2), -r)])
    exponents = collect(commutator, 2, l).exponents
    assert exponents[:2] == (0, 0)
    assert abs(exponents[2]) == r * r
    assert all(abs(x) <= r ** 3 for x in exponents[3:])
