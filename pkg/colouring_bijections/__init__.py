"""
Colouring Bijections

Finite 3-groups, colouring bijections and strong complete mappings:
verification, backtracking search, lifting across normal subgroups and
chromatic certificates for the Cayley graph of G^3.
"""

__version__ = "1.0.0"

from .config import Config
from .groups import FiniteGroup, build_from_spec
from .perm_maps import Perm, is_colouring_bijection, is_strong_complete_mapping
from .pipeline import ColouringPipeline, colour
from .search_engine import SearchConfig, search

__all__ = [
    "Config",
    "FiniteGroup",
    "build_from_spec",
    "Perm",
    "is_colouring_bijection",
    "is_strong_complete_mapping",
    "ColouringPipeline",
    "colour",
    "SearchConfig",
    "search",
]
