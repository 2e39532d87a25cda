"""
Command Module

Base class of the nilwalk commands.

A command declares its settings the same way for every subcommand:

    _command          name of the subcommand
    _option_key       setting that selects one of the nested settings classes,
                      or None when the command has a single variant
    _common_settings  defaults shared by every variant
    _option_registry  upper-cased option value -> nested settings class, whose
                      `default_settings` extend the common ones

Settings resolve as common defaults < option defaults < config file < flags.
REQUIRED marks a setting that has to be supplied.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import logging

from .._utils import parse_rational
from ..algebra.groups import group_spec_from_json
from ..algebra.weights import CompatiblePair, weight_system_from_json, weights_from_alpha
from ..errors import ConfigError, InvalidArgumentError

logger = logging.getLogger(__name__)


class _Required:
    def __repr__(self):
        return "REQUIRED"


REQUIRED = _Required()


class Command:
    """
    Attributes:
        settings (dict): The fully resolved settings.
        option (str): Upper-cased value of the option key.
        partial (dict): Results gathered before a budget was exceeded.
    """

    _command = None
    _option_key = None
    _common_settings = {}
    _option_registry = {}
    partial = None

    def __init__(self, config=None, overrides=None):
        self.option, self.settings = self.resolve(config or {}, overrides or {})

    @classmethod
    def resolve(cls, config, overrides):
        if not isinstance(config, dict):
            raise ConfigError("Config of '{}' must be a JSON object".format(cls._command))
        if cls._option_key is None:
            option = cls._command.upper()
        else:
            option = config.get(cls._option_key, cls._common_settings.get(cls._option_key))
            if option is REQUIRED or option is None:
                raise ConfigError("'{}' needs the setting '{}'".format(cls._command, cls._option_key))
            option = str(option).upper()
        if option not in cls._option_registry:
            raise ConfigError("Unknown {} for '{}': {}".format(cls._option_key, cls._command, option))

        settings = dict(cls._common_settings)
        settings.update(cls._option_registry[option].default_settings)
        unknown = sorted(set(config) - set(settings))
        if unknown:
            raise ConfigError("Unknown settings for '{}': {}".format(cls._command, ", ".join(unknown)))
        settings.update(config)
        for key, value in overrides.items():
            if value is None:
                continue
            if key in settings:
                settings[key] = value
            else:
                logger.debug("Flag %s does not apply to '%s'", key, cls._command)
        missing = sorted(key for key, value in settings.items() if value is REQUIRED)
        if missing:
            raise ConfigError("Missing settings for '{}': {}".format(cls._command, ", ".join(missing)))
        if cls._option_key is not None:
            settings[cls._option_key] = option.lower()
        return option, settings

    def resolved_config(self):
        return {"command": self._command, **self.settings}

    def run(self):
        """Returns a JSON-serializable result dict."""
        raise NotImplementedError

    # Shared readers

    def group(self):
        return group_spec_from_json(self.settings["group"])

    def alphas(self):
        try:
            return [parse_rational(a) for a in self.settings["a"]]
        except InvalidArgumentError as error:
            raise ConfigError("Bad exponent list: {}".format(error)) from None

    def weight_pair(self, spec):
        """Weights from an exponent vector `a` or an explicit `weights` list."""
        if self.settings.get("a") is not None:
            pair = weights_from_alpha(self.alphas(), int(self.settings.get("dimension", 2)))
        elif self.settings.get("weights") is not None:
            pair = CompatiblePair.from_system(weight_system_from_json(self.settings["weights"]))
        else:
            pair = CompatiblePair.from_system(weight_system_from_json(["1"] * spec.k))
        if pair.weight_system.k != spec.k:
            raise ConfigError("{} weights given for {} generators".format(pair.weight_system.k, spec.k))
        return pair


__all__ = [
    "REQUIRED",
    "Command",
]
