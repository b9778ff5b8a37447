"""Exact computations on exterior powers of linear maps and their orbit geometry."""

from .core import Matrix, Mod, combinations, det, rank
from .exterior import ExteriorPoint, compound

__all__ = ["Matrix", "Mod", "combinations", "det", "rank", "ExteriorPoint", "compound"]
__version__ = "0.1.0"
