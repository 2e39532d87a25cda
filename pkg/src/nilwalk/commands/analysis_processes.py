"""
Analysis Processes Module

Commands over the exact algebra: the weight filtration report with its
predicted exponent (analyze), comparable radii and power growth of single
elements (norm), and ball volume profiles with optional box counts (volume).

Each command takes its weights either from an exponent vector a (option
"alpha") or from an explicit weight list (option "weights").

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import logging

from .._utils import format_rational
from ..algebra.filtration import filtration, predicted_return_exponent
from ..algebra.geometry import (
    ball_volume,
    box_count_oracle,
    box_lower_bound,
    build_commutator_basis,
    power_growth_check,
    quasi_norm_radius,
)
from ..algebra.groups import element_from_json
from ..algebra.weights import weight_system_to_json
from ..errors import ConfigError
from ._command import REQUIRED, Command

logger = logging.getLogger(__name__)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Analyze
class Analyze(Command):
    """
    The Analyze class computes the weight filtration of a group spec: level
    ranks, D(S, w), j_w of every generator, the core, and for exponent vectors
    the predicted return exponent with its regime.

    Attributes:
        _command (str): The command associated with the 'analyze' process.
        _option_key (str): Selects how weights are given.
        _common_settings (dict): Dictionary containing the common settings for the process.
    """

    _command = 'analyze'
    _option_key = 'weights_from'

    _common_settings = {
        "weights_from": "alpha",
        "group": REQUIRED
    }

    class _AlphaSettings:
        """
        Nested class for weights induced by stable exponents.
        """
        default_settings = {
            "a": REQUIRED,
            "dimension": 2
        }

    class _WeightsSettings:
        """
        Nested class for explicit weight vectors.
        """
        default_settings = {
            "weights": REQUIRED
        }

    _option_registry = {
        'ALPHA': _AlphaSettings,
        'WEIGHTS': _WeightsSettings
    }

    def run(self):
        spec = self.group()
        pair = self.weight_pair(spec)
        report = filtration(spec, pair.weight_system)
        result = report.to_json()
        if self.option == 'ALPHA':
            alphas = self.alphas()
            if report.system.dimension == 2:
                prediction = predicted_return_exponent(spec, alphas, report)
            else:
                prediction = predicted_return_exponent(spec, alphas)
            result["prediction"] = prediction.to_json()
            result["regime"] = prediction.regime
        return result


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Norm
class Norm(Command):
    """
    The Norm class decomposes an element over a commutator basis adapted to the
    weights and reports its comparable radius; with `powers` it also tabulates
    the growth of g^n against the weight function of its level.

    Attributes:
        _command (str): The command associated with the 'norm' process.
        _option_key (str): Selects how weights are given.
        _common_settings (dict): Dictionary containing the common settings for the process.
    """

    _command = 'norm'
    _option_key = 'weights_from'

    _common_settings = {
        "weights_from": "weights",
        "group": REQUIRED,
        "element": REQUIRED,
        "powers": None
    }

    class _AlphaSettings:
        """
        Nested class for weights induced by stable exponents.
        """
        default_settings = {
            "a": REQUIRED,
            "dimension": 2
        }

    class _WeightsSettings:
        """
        Nested class for explicit weight vectors; equal weights when omitted.
        """
        default_settings = {
            "weights": None
        }

    _option_registry = {
        'ALPHA': _AlphaSettings,
        'WEIGHTS': _WeightsSettings
    }

    def run(self):
        spec = self.group()
        pair = self.weight_pair(spec)
        report = filtration(spec, pair.weight_system)
        basis = build_commutator_basis(spec, pair, report)
        g = element_from_json(spec.backend, self.settings["element"])
        value = quasi_norm_radius(g, basis)
        result = {
            "weights": weight_system_to_json(pair.weight_system),
            "basis": basis.to_json(),
            "norm": value.to_json(),
        }
        if self.settings["powers"]:
            table = power_growth_check(g, [int(n) for n in self.settings["powers"]], basis, report)
            result["power_growth"] = table.to_json()
        return result


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Volume
class Volume(Command):
    """
    The Volume class evaluates the ball volume profile prod_j F_j(r)^{R_j} over a
    list of radii and, when `box_count` is set, counts the exact box sizes with
    their product lower bounds.

    Attributes:
        _command (str): The command associated with the 'volume' process.
        _option_key (str): Selects how weights are given.
        _common_settings (dict): Dictionary containing the common settings for the process.
    """

    _command = 'volume'
    _option_key = 'weights_from'

    _common_settings = {
        "weights_from": "weights",
        "group": REQUIRED,
        "radii": [1, 2, 4, 8, 16],
        "box_count": False
    }

    class _AlphaSettings:
        """
        Nested class for weights induced by stable exponents.
        """
        default_settings = {
            "a": REQUIRED,
            "dimension": 2
        }

    class _WeightsSettings:
        """
        Nested class for explicit weight vectors; equal weights when omitted.
        """
        default_settings = {
            "weights": None
        }

    _option_registry = {
        'ALPHA': _AlphaSettings,
        'WEIGHTS': _WeightsSettings
    }

    def run(self):
        spec = self.group()
        pair = self.weight_pair(spec)
        report = filtration(spec, pair.weight_system)
        radii = [int(r) for r in self.settings["radii"]]
        if any(r < 1 for r in radii):
            raise ConfigError("Volume radii must be >= 1")
        rows = []
        self.partial = {"rows": rows}
        basis = build_commutator_basis(spec, pair, report) if self.settings["box_count"] else None
        for r in radii:
            row = ball_volume(r, report).to_json()
            if basis is not None:
                row["box_count"] = box_count_oracle(r, basis)
                row["box_lower_bound"] = box_lower_bound(r, basis)
            rows.append(row)
        return {
            "exponents": [format_rational(d) for d in report.D_components],
            "ranks": list(report.ranks),
            "rows": rows,
        }


__all__ = [
    "Analyze",
    "Norm",
    "Volume",
]
