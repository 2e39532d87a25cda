import math
from fractions import Fraction

import pytest

from nilwalk.algebra.filtration import (
    IDENTITY_LEVEL,
    D_exponent,
    core,
    filtration,
    j_w,
    lie_closure_dim,
    lower_central_dimension,
    predicted_return_exponent,
    smith_level_ranks,
    zd_greedy_sigma,
)
from nilwalk.algebra.groups import (
    filiform_spec,
    free_nilpotent_spec,
    regular_representation,
    unitriangular_spec,
    zd_spec,
)
from nilwalk.algebra.weights import WeightSystem, WeightVec, weights_from_alpha
from nilwalk.errors import InvalidArgumentError, UnsupportedError

F = Fraction


def gamma_family(gamma):
    """w(X) = (3/2, 0), w(Y) = (2, 1), w(Z) = (gamma, 0)."""
    return WeightSystem(((F(3, 2), 0), (2, 1), (F(gamma), 0)))


def test_lie_closure_dim(heisenberg_xy):
    assert lie_closure_dim(heisenberg_xy.generators) == 3
    assert lie_closure_dim(heisenberg_xy.generators[:1]) == 1
    assert lie_closure_dim([]) == 0


def test_heisenberg_with_z5(heisenberg_z5):
    report = filtration(heisenberg_z5, WeightSystem.scalar(["1", "3/2", "3"]))
    assert report.ranks == (1, 1, 0, 0, 1)
    assert [w[0] for w in report.weight_values] == [F(1), F(3, 2), F(2), F(5, 2), F(3)]
    assert report.D == F(11, 2)
    assert report.j_star == 5
    assert report.hirsch_length == 3


def test_heisenberg_with_z5_json(heisenberg_z5):
    data = filtration(heisenberg_z5, WeightSystem.scalar(["1", "3/2", "3"])).to_json()
    assert data["D"] == "11/2"
    assert data["ranks"] == [1, 1, 0, 0, 1]
    assert "D1" not in data


def test_u4_with_corner(u4_with_corner):
    report = filtration(u4_with_corner, weights_from_alpha(["1", "2", "5", "1/3"]).weight_system)
    assert report.D_components == (F(15, 2), F(3, 2))
    nonzero = [(level.weight_value, level.rank) for level in report.levels if level.rank]
    assert nonzero == [
        (WeightVec.of(F(1, 2), 0), 1),
        (WeightVec.of(F(1, 2), F(1, 2)), 1),
        (WeightVec.of(1, 0), 1),
        (WeightVec.of(1, F(1, 2)), 1),
        (WeightVec.of(F(3, 2), F(1, 2)), 1),
        (WeightVec.of(3, 0), 1),
    ]
    data = report.to_json()
    assert (data["D1"], data["D2"]) == ("15/2", "3/2")


@pytest.mark.parametrize("d,expected", [(2, 1), (3, 4), (4, 10)])
def test_unitriangular_equal_exponents(d, expected):
    spec = unitriangular_spec(d)
    report = filtration(spec, weights_from_alpha(["1"] * (d - 1), dimension=1).weight_system)
    assert report.D == expected


def test_equal_weights_scale_the_exponent():
    spec = unitriangular_spec(4)
    report = filtration(spec, weights_from_alpha(["1/2"] * 3, dimension=1).weight_system)
    assert report.D == 20


@pytest.mark.parametrize("a,expected", [
    (["1", "1", "1"], 4),
    (["1", "3/2", "1/2"], 1 + F(2, 3) + 2),
    (["1/2", "1/2", "1"], 2 + 2 + 4),
])
def test_heisenberg_exponent_formula(heisenberg, a, expected):
    report = filtration(heisenberg, weights_from_alpha(a, dimension=1).weight_system)
    assert report.D == expected


def test_free_nilpotent_ranks():
    report = filtration(free_nilpotent_spec(2, 3), WeightSystem.scalar(["1", "1"]))
    assert report.ranks == (2, 1, 2)
    assert report.D == 10


def test_lower_central_dimension(heisenberg):
    assert lower_central_dimension(heisenberg) == 4
    assert lower_central_dimension(filiform_spec(3)) == 7
    assert lower_central_dimension(zd_spec([(1, 0), (0, 1), (1, 1)])) == 2


def test_core_regimes_of_the_gamma_family(heisenberg):
    low = filtration(heisenberg, gamma_family(3))
    assert low.core == (1, 2)
    assert low.D_components == (7, 2)
    high = filtration(heisenberg, gamma_family(4))
    assert high.core == (1, 2, 3)
    assert high.D_components == (F(15, 2), 1)


def test_core_split_is_at_seven_halves(heisenberg):
    assert filtration(heisenberg, gamma_family(F(7, 2))).core == (1, 2)
    assert filtration(heisenberg, gamma_family(F(15, 4))).core == (1, 2, 3)


def test_j_w(heisenberg):
    report = filtration(heisenberg, WeightSystem.scalar(["1", "1", "1"]))
    assert report.j_w_table == (1, 1, 2)
    assert j_w(heisenberg.identity(), report) == IDENTITY_LEVEL


def test_j_w_rejects_foreign_elements(heisenberg):
    report = filtration(heisenberg, WeightSystem.scalar(["1", "1", "1"]))
    with pytest.raises(UnsupportedError):
        j_w(zd_spec([(1,)]).generators[0], report)


def test_weight_count_must_match(heisenberg):
    with pytest.raises(InvalidArgumentError):
        filtration(heisenberg, WeightSystem.scalar(["1", "1"]))


def test_greedy_sigma():
    sigma = zd_greedy_sigma([(1, 0), (0, 1), (1, 1)], ["1/2", "3/2", "9/10"])
    assert sigma.indices == (1, 3)
    assert sigma.inverse_beta == F(28, 9)
    assert sigma.gamma == 0


def test_greedy_sigma_agrees_with_filtration():
    vectors = [(1, 0), (0, 1), (1, 1)]
    a = ["1/2", "3/2", "9/10"]
    report = filtration(zd_spec(vectors), weights_from_alpha(a, dimension=1).weight_system)
    assert report.D == zd_greedy_sigma(vectors, a).inverse_beta == F(28, 9)


def test_greedy_sigma_counts_exponent_two():
    sigma = zd_greedy_sigma([(1, 0), (0, 1)], ["2", "inf"])
    assert sigma.gamma == 1
    assert sigma.beta == 1


def test_greedy_sigma_needs_full_rank():
    with pytest.raises(InvalidArgumentError):
        zd_greedy_sigma([(1, 1), (2, 2)], ["1", "1"])


def test_smith_levels_agree_with_filtration():
    vectors = [(1, 0), (0, 1), (1, 1)]
    system = weights_from_alpha(["1/2", "3/2", "9/10"], dimension=1).weight_system
    levels = smith_level_ranks(zd_spec(vectors), system)
    assert sum(level.weight_value[0] * level.rank for level in levels) == F(28, 9)


def test_smith_levels_show_torsion():
    levels = smith_level_ranks(zd_spec([(2, 0), (0, 1)]), WeightSystem.scalar(["1", "1"]))
    assert levels[0].invariant_factors == (1, 2)
    assert levels[0].rank == 2


def test_smith_levels_need_zd(heisenberg):
    with pytest.raises(UnsupportedError):
        smith_level_ranks(heisenberg, WeightSystem.scalar(["1", "1", "1"]))


def test_prediction_heisenberg_pure_power(heisenberg):
    prediction = predicted_return_exponent(heisenberg, ["1", "1", "1"])
    assert prediction.regime == "pure-power"
    assert prediction.poly_exponent == 4
    assert prediction.core == (1, 2)
    assert not prediction.upper_bound_only


def test_prediction_u4_is_mixed(u4_with_corner):
    prediction = predicted_return_exponent(u4_with_corner, ["1", "2", "5", "1/3"])
    assert prediction.regime == "mixed/unproven"
    assert prediction.upper_bound_only
    assert (prediction.poly_exponent, prediction.log_exponent) == (F(15, 2), F(3, 2))


def test_prediction_all_core_exponents_two(heisenberg_xy):
    prediction = predicted_return_exponent(heisenberg_xy, ["2", "2"])
    assert prediction.regime == "all-core-α=2"
    assert prediction.poly_exponent == prediction.log_exponent == 2


def test_prediction_light_tails_give_half_the_growth(heisenberg_xy):
    prediction = predicted_return_exponent(heisenberg_xy, [math.inf, "3"])
    assert prediction.regime == "pure-power"
    assert prediction.poly_exponent == 2
    assert prediction.log_exponent == 0


def test_prediction_needs_one_exponent_per_generator(heisenberg):
    with pytest.raises(InvalidArgumentError):
        predicted_return_exponent(heisenberg, ["1"])


def test_core_and_exponent_accessors(heisenberg):
    system = gamma_family(3)
    report = filtration(heisenberg, system)
    assert core(heisenberg, system, report) == report.core == (1, 2)
    assert D_exponent(report) == (7, 2)


@pytest.mark.parametrize("k,l,weights", [
    (2, 2, ["1", "1"]),
    (2, 3, ["1", "1"]),
    (2, 3, ["1", "2"]),
    (3, 2, ["1", "3/2", "2"]),
])
def test_regular_representation_matches_the_hall_backend(k, l, weights):
    system = WeightSystem.scalar(weights)
    matrices = filtration(regular_representation(k, l), system)
    hall = filtration(free_nilpotent_spec(k, l), system)
    assert matrices.weight_values == hall.weight_values
    assert matrices.ranks == hall.ranks
    assert matrices.D_components == hall.D_components
    assert matrices.core == hall.core


@pytest.mark.parametrize("vectors,weights", [
    ([(1, 0), (0, 1), (1, 1)], ["2", "2/3", "20/19"]),
    ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], ["1", "2", "3"]),
    ([(2, 0), (0, 1), (1, 1), (0, 3)], ["1", "2", "1", "3"]),
    ([(1, 2, 0), (0, 0, 5), (3, 1, 1), (1, 1, 1)], ["1/2", "1", "1", "7/4"]),
])
def test_smith_ranks_agree_with_lie_ranks_per_level(vectors, weights):
    spec = zd_spec(vectors)
    system = WeightSystem.scalar(weights)
    report = filtration(spec, system)
    levels = smith_level_ranks(spec, system)
    assert [level.weight_value for level in levels[:report.j_star]] == list(report.weight_values)
    assert tuple(level.rank for level in levels[:report.j_star]) == report.ranks
    assert all(level.rank == 0 for level in levels[report.j_star:])


@pytest.mark.parametrize("spec_name,system", [
    ("heisenberg", gamma_family(3)),
    ("heisenberg", gamma_family(F(7, 2))),
    ("heisenberg", gamma_family(4)),
    ("heisenberg_z5", WeightSystem.scalar(["1", "3/2", "3"])),
    ("u4_with_corner", WeightSystem.scalar(["1", "1/2", "2", "5"])),
])
def test_core_generators_alone_give_the_same_exponent(request, spec_name, system):
    spec = request.getfixturevalue(spec_name)
    report = filtration(spec, system)
    dropped = [i for i in range(1, spec.k + 1) if i not in report.core]
    reduced = filtration(spec.without(dropped), WeightSystem(tuple(system[i - 1] for i in report.core)))
    assert reduced.D_components == report.D_components


def test_a_dropped_generator_is_outside_the_core():
    spec = zd_spec([(1, 0), (0, 1), (1, 1)])
    system = WeightSystem.scalar(["1", "1", "1/2"])
    report = filtration(spec, system)
    assert 3 not in report.core
    assert filtration(spec.without([3]), WeightSystem.scalar(["1", "1"])).D == report.D
