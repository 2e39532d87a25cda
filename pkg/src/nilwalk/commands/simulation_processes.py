"""
Simulation Processes Module

The simulate command: collision estimates of mu^(2n)(e) over a horizon grid,
exponent regressions and the exact prediction side by side.

Option "stable" walks with mu_{S,a}; option "radial" walks with the
norm-radial law nu_gamma of the word norm, whose predicted exponent is
D(G) / gamma.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import logging
from fractions import Fraction

from .._utils import format_rational, parse_rational
from ..algebra.filtration import lower_central_dimension, predicted_return_exponent
from ..errors import ConfigError
from ..simulation.radial import radial_model
from ..simulation.regression import MODELS, compare_models
from ..simulation.walker import BATCH_SIZE, StableWalkModel, collision_series
from ._command import REQUIRED, Command

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Simulate
class Simulate(Command):
    """
    The Simulate class estimates return probabilities over `n_grid`, fits the
    decay exponent with each requested regression model and compares the
    power-model slope with the predicted one.

    Attributes:
        _command (str): The command associated with the 'simulate' process.
        _option_key (str): Selects the step measure.
        _common_settings (dict): Dictionary containing the common settings for the process.
    """

    _command = 'simulate'
    _option_key = 'measure'

    _common_settings = {
        "measure": "stable",
        "group": REQUIRED,
        "n_grid": [16, 32, 64, 128],
        "samples": 10000,
        "seed": 0,
        "workers": 1,
        "batch_size": BATCH_SIZE,
        "budget_seconds": None,
        "models": ["power"],
        "tolerance": 0.25
    }

    class _StableSettings:
        """
        Nested class for stable-like step laws; `a` holds one exponent per generator.
        """
        default_settings = {
            "a": REQUIRED
        }

    class _RadialSettings:
        """
        Nested class for norm-radial step laws.
        """
        default_settings = {
            "gamma": REQUIRED,
            "radius": 12,
            "max_truncated_mass": 0.01
        }

    _option_registry = {
        'STABLE': _StableSettings,
        'RADIAL': _RadialSettings
    }

    def _models(self):
        models = list(self.settings["models"])
        unknown = [m for m in models if m not in MODELS]
        if unknown:
            raise ConfigError("Unknown regression models: " + ", ".join(unknown))
        if self.option == 'STABLE' and any(a == 2 for a in self.alphas()):
            models += [m for m in ("power", "power-log") if m not in models]
        return models

    def _prediction(self, spec):
        if self.option == 'STABLE':
            return predicted_return_exponent(spec, self.alphas()).to_json()
        gamma = parse_rational(str(self.settings["gamma"]))
        exponent = Fraction(lower_central_dimension(spec)) / gamma
        return {"poly_exponent": format_rational(exponent), "log_exponent": "0",
                "regime": "norm-radial", "upper_bound_only": False}

    def run(self):
        spec = self.group()
        if self.option == 'STABLE':
            model = StableWalkModel(spec, self.alphas())
        else:
            model = radial_model(
                spec,
                float(parse_rational(str(self.settings["gamma"]))),
                int(self.settings["radius"]),
                float(self.settings["max_truncated_mass"]),
            )
        models = self._models()
        prediction = self._prediction(spec)

        rows = []
        self.partial = {"rows": rows, "prediction": prediction, "model": model.to_json()}
        series = collision_series(
            model,
            [int(n) for n in self.settings["n_grid"]],
            int(self.settings["samples"]),
            int(self.settings["seed"]),
            int(self.settings["workers"]),
            self.settings["budget_seconds"],
            int(self.settings["batch_size"]),
        )
        rows.extend(e.to_row() for e in series.estimates)

        fits, best = {}, None
        points = [p for p in series.points() if p[1] > 0]
        if len(points) >= MIN_FIT_POINTS:
            results, best = compare_models(points, models)
            fits = {m: fit.to_json() for m, fit in results.items()}
        else:
            logger.warning("Only %d positive estimates; no regression", len(points))

        expected = -float(Fraction(prediction["poly_exponent"]))
        # [n log n]^-D/2 decay is judged on the tied power-log slope
        judged = "power-log" if prediction.get("regime") == "all-core-α=2" and "power-log" in fits else "power"
        verdict = None
        if judged in fits:
            verdict = abs(fits[judged]["slope"] - expected) <= float(self.settings["tolerance"])
        return {
            "model": model.to_json(),
            "rows": rows,
            "fits": fits,
            "best_model": best,
            "prediction": prediction,
            "expected_slope": expected,
            "judged_model": judged,
            "within_tolerance": verdict,
            "truncated": series.truncated,
            "truncation_reason": series.reason,
        }


__all__ = [
    "Simulate",
]
