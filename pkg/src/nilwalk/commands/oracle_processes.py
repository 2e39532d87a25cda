"""
Oracle Processes Module

Exact reference tables for test harnesses: walk convolutions on Z^d, Witt
counts of free nilpotent groups, box counts and Smith-form level ranks.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

from .._utils import format_rational
from ..algebra.collection import (
    free_nilpotent_dimension,
    hall_basis,
    predicted_free_nilpotent_exponent,
    witt_number,
)
from ..algebra.filtration import filtration, smith_level_ranks
from ..algebra.geometry import box_count_oracle, box_lower_bound, build_commutator_basis
from ..simulation.walker import CONVOLUTION_CUTOFF, exact_convolution
from ._command import REQUIRED, Command


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Oracle
class Oracle(Command):
    """
    The Oracle class computes one exact table, selected by `table`.

    Attributes:
        _command (str): The command associated with the 'oracle' process.
        _option_key (str): Key to identify the table to compute.
        _common_settings (dict): Dictionary containing the common settings for the process.
    """

    _command = 'oracle'
    _option_key = 'table'

    _common_settings = {
        "table": REQUIRED
    }

    class _ConvolutionSettings:
        """
        Nested class for the n-step walk law on Z^d.
        """
        default_settings = {
            "group": REQUIRED,
            "a": REQUIRED,
            "n": REQUIRED,
            "cutoff": CONVOLUTION_CUTOFF
        }

    class _WittSettings:
        """
        Nested class for Witt counts of N(k, l); `a` adds the exponent formula.
        """
        default_settings = {
            "k": REQUIRED,
            "l": REQUIRED,
            "a": None
        }

    class _BoxCountSettings:
        """
        Nested class for box counts over a commutator basis.
        """
        default_settings = {
            "group": REQUIRED,
            "weights": None,
            "r": REQUIRED
        }

    class _SmithSettings:
        """
        Nested class for Smith-form level ranks of Z^d specs.
        """
        default_settings = {
            "group": REQUIRED,
            "weights": None
        }

    _option_registry = {
        'CONVOLUTION': _ConvolutionSettings,
        'WITT': _WittSettings,
        'BOX_COUNT': _BoxCountSettings,
        'SMITH': _SmithSettings
    }

    def run(self):
        handler = {
            'CONVOLUTION': self._convolution,
            'WITT': self._witt,
            'BOX_COUNT': self._box_count,
            'SMITH': self._smith,
        }[self.option]
        result = handler()
        result["table"] = self.option.lower()
        return result

    def _convolution(self):
        spec = self.group()
        table = exact_convolution(spec, self.alphas(), int(self.settings["n"]), int(self.settings["cutoff"]))
        return table.to_json()

    def _witt(self):
        k, l = int(self.settings["k"]), int(self.settings["l"])
        basis = hall_basis(k, l)
        result = {
            "k": k,
            "l": l,
            "witt_numbers": [witt_number(k, m) for m in range(1, l + 1)],
            "basis": basis.to_json(),
            "dimension": free_nilpotent_dimension(k, l),
        }
        if self.settings["a"] is not None:
            result["D"] = format_rational(predicted_free_nilpotent_exponent(k, l, self.alphas()))
        return result

    def _box_count(self):
        spec = self.group()
        pair = self.weight_pair(spec)
        basis = build_commutator_basis(spec, pair, filtration(spec, pair.weight_system))
        r = int(self.settings["r"])
        return {
            "r": r,
            "count": box_count_oracle(r, basis),
            "lower_bound": box_lower_bound(r, basis) if r >= 1 else 1,
            "basis": basis.to_json(),
        }

    def _smith(self):
        spec = self.group()
        pair = self.weight_pair(spec)
        return {
            "levels": [
                {
                    "weight": str(level.weight_value),
                    "lattice_rank": level.lattice_rank,
                    "invariant_factors": list(level.invariant_factors),
                    "rank": level.rank,
                }
                for level in smith_level_ranks(spec, pair.weight_system)
            ]
        }


__all__ = [
    "Oracle",
]
