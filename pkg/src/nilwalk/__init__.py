from . import algebra
from . import commands
from . import simulation
from .errors import *

__all__ = [
    "algebra",
    "commands",
    "simulation",
]
