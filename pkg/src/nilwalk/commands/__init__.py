from ._command import *
from .analysis_processes import *
from .oracle_processes import *
from .simulation_processes import *

__all__ = [
    "analysis_processes",
    "oracle_processes",
    "simulation_processes",
]
