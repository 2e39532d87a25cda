from .laws import *
from .walker import *
from .radial import *
from .regression import *

__all__ = [
    "laws",
    "walker",
    "radial",
    "regression",
]
