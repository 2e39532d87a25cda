import math
from fractions import Fraction

from .errors import InvalidArgumentError


def ensure_iterable(items):
    if items is None:
        items = []
    elif isinstance(items, str) or not hasattr(items, '__iter__'):
        items = [items]
    return items


def parse_rational(value):
    """
    Reads an exact rational from an int, a Fraction or a string "p/q".

    The string "inf" (or the float infinity) is returned as math.inf; floats are
    refused because they would silently corrupt exact results.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidArgumentError("Boolean is not a rational: " + str(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return math.inf
        raise InvalidArgumentError("Floats are not accepted where exact rationals are required: " + str(value))
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "infinity", "+inf"):
            return math.inf
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InvalidArgumentError("Not a rational literal: " + repr(value)) from None
    raise InvalidArgumentError("Not a rational literal: " + repr(value))


def format_rational(value):
    """Serializes a rational as "p/q" (or "n" for integers, "inf" for infinity)."""
    if value == math.inf:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


class Dispatcher:
    def __init__(self):
        self.handlers = {}

    def register(self, type, handler):
        self.handlers[type] = handler

    def dispatch(self, type, *args, **kwargs):
        if type in self.handlers:
            return self.handlers[type](*args, **kwargs)
        else:
            raise InvalidArgumentError("No handler registered for command: " + str(type))


def generalized_binomial(n, p):
    """C(n, p) for any integer n and p >= 0; an integer."""
    if p < 0:
        raise InvalidArgumentError("Binomial order must be >= 0, got " + str(p))
    if n >= 0:
        return math.comb(n, p)
    return (-1) ** p * math.comb(-n + p - 1, p)
