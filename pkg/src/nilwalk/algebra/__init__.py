from .commutators import *
from .weights import *
from .linalg import *
from .collection import *
from .groups import *
from .filtration import *
from .geometry import *

__all__ = [
    "commutators",
    "weights",
    "linalg",
    "collection",
    "groups",
    "filtration",
    "geometry",
]
