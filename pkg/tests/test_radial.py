import numpy as np
import pytest

from nilwalk.algebra.groups import zd_spec
from nilwalk.errors import InvalidArgumentError, ResourceLimitError
from nilwalk.simulation.laws import stream
from nilwalk.simulation.radial import check_gamma, radial_model
from nilwalk.simulation.regression import fit_exponent
from nilwalk.simulation.walker import collision_series


@pytest.mark.parametrize("gamma", [0, 2, -1, 2.5])
def test_gamma_domain(gamma):
    with pytest.raises(InvalidArgumentError):
        check_gamma(gamma)


def test_z2_model_is_exact(z2):
    model = radial_model(z2, 1.0)
    assert model.exact
    assert model.truncated_mass == 0.0
    steps = model.steps(stream(1), 100000)
    assert steps.shape == (100000, 2)
    zero = np.mean(np.all(steps == 0, axis=1))
    assert zero == pytest.approx(model.head_cdf[0], abs=0.01)


def test_z2_steps_are_symmetric(z2):
    model = radial_model(z2, 1.5)
    steps = model.steps(stream(2), 40000)
    for axis in (0, 1):
        assert np.mean(steps[:, axis] > 0) == pytest.approx(np.mean(steps[:, axis] < 0), abs=0.02)
    assert model.step_elements(stream(2), 3)[0].backend == "zd"


def test_heisenberg_model_is_enumerated(heisenberg_xy):
    model = radial_model(heisenberg_xy, 1.0, radius=4, max_truncated_mass=0.99)
    assert not model.exact
    assert 0 < model.truncated_mass <= 0.99
    steps = model.steps(stream(3), 20)
    assert steps.shape == (20, 3, 3)
    assert model.to_json()["enumeration_radius"] == 4
    assert model.to_json()["max_truncated_mass"] == 0.99


def test_heavy_truncation_is_refused(heisenberg_xy):
    with pytest.raises(ResourceLimitError):
        radial_model(heisenberg_xy, 1.0, radius=4)
    with pytest.raises(ResourceLimitError):
        radial_model(heisenberg_xy, 1.5, radius=4, max_truncated_mass=0.01)


def test_non_standard_z2_generators_are_not_silently_truncated():
    spec = zd_spec([(1, 0), (0, 1), (1, 1)])
    with pytest.raises(ResourceLimitError):
        radial_model(spec, 1.0, radius=4)


def test_truncation_tolerance_domain(heisenberg_xy):
    with pytest.raises(InvalidArgumentError):
        radial_model(heisenberg_xy, 1.0, radius=4, max_truncated_mass=1.0)
    with pytest.raises(InvalidArgumentError):
        radial_model(heisenberg_xy, 1.0, radius=4, max_truncated_mass=-0.1)


def test_enumeration_radius_is_bounded(heisenberg_xy):
    with pytest.raises(InvalidArgumentError):
        radial_model(heisenberg_xy, 1.0, radius=1)


@pytest.mark.slow
def test_radial_walk_on_z2_decays_like_one_over_n_squared(z2):
    model = radial_model(z2, 1.0)
    series = collision_series(model, [8, 16, 32, 64, 128], 200000, seed=4)
    fit = fit_exponent(series.points(), "power")
    assert fit.slope == pytest.approx(-2, abs=0.2)
