import numpy as np
import pytest

from nilwalk.errors import InvalidArgumentError
from nilwalk.simulation.regression import compare_models, fit_exponent

GRID = [8, 16, 32, 64, 128, 256, 512, 1024]


def points(f):
    return [(n, f(n), 0.0) for n in GRID]


def test_power_fit_recovers_the_slope():
    fit = fit_exponent(points(lambda n: 3.0 * n ** -4.0))
    assert fit.slope == pytest.approx(-4.0)
    assert fit.intercept == pytest.approx(np.log(3.0))
    assert fit.covers(-4.0, 0.01)


def test_power_log_fit():
    fit = fit_exponent(points(lambda n: (n * np.log(n)) ** -2.0), "power-log")
    assert fit.slope == pytest.approx(-2.0)


def test_power_plus_log_fit():
    fit = fit_exponent(points(lambda n: n ** -2.0 * np.log(n) ** -0.5), "power+log")
    assert fit.slope == pytest.approx(-2.0)
    assert fit.log_coefficient == pytest.approx(-0.5)


def test_weighted_fit_uses_standard_errors():
    data = [(n, n ** -1.5, 0.01 * n ** -1.5) for n in GRID]
    fit = fit_exponent(data)
    assert fit.slope == pytest.approx(-1.5)
    assert fit.half_width >= 0


def test_fit_errors():
    with pytest.raises(InvalidArgumentError):
        fit_exponent(points(lambda n: 1.0 / n)[:3])
    with pytest.raises(InvalidArgumentError):
        fit_exponent([(n, 0.0, 0.0) for n in GRID])
    with pytest.raises(InvalidArgumentError):
        fit_exponent(points(lambda n: 1.0 / n), "exponential")
    with pytest.raises(InvalidArgumentError):
        fit_exponent([(n, 1.0 / n, 0.0) for n in (1, 2, 4, 8)], "power-log")


def test_compare_models_prefers_the_true_shape():
    results, best = compare_models(points(lambda n: (n * np.log(n)) ** -2.0))
    assert best == "power-log"
    assert set(results) == {"power", "power-log"}
