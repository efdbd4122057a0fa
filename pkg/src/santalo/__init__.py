"""Planar convex bodies bounded by segments and circular arcs, their six
classical functionals, a catalog of inequalities between them and the
Blaschke-Santalo diagrams those inequalities describe."""

from .functionals import FunctionalVector, evaluate
from .geometry import ArcGon, convex_hull, disk, polygon, segment
from .inequalities import catalog, check_all, slack

__all__ = [
    "ArcGon",
    "FunctionalVector",
    "catalog",
    "check_all",
    "convex_hull",
    "disk",
    "evaluate",
    "polygon",
    "segment",
    "slack",
]
__version__ = "0.1.0"
