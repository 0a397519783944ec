"""Local constraint satisfaction on hyperbolic graphs.

Pipeline: build or load an embedded graph, state neighbourhood constraints,
reduce them to edge constraints, decompose the graph, and run a counting
dynamic program that also yields witnesses and uniform samples.
"""

from .csp import ColorSet, HECSPInstance, HLCSPInstance, check_hecsp, check_hlcsp, reduce_to_hecsp
from .geometry import HypPoint, dist, disk_area, disk_perimeter
from .tessellation import HypGraph, TilingSpec, generate_tiling, natural_params, validate_embedding

__all__ = [
    "ColorSet", "HECSPInstance", "HLCSPInstance", "check_hecsp", "check_hlcsp", "reduce_to_hecsp",
    "HypPoint", "dist", "disk_area", "disk_perimeter",
    "HypGraph", "TilingSpec", "generate_tiling", "natural_params", "validate_embedding",
]
__version__ = "0.1.0"
