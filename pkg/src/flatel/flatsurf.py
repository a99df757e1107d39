"""Aggregate namespace for the flat-surface layer.

The layer is implemented across four files: polygon complexes and
validation in `surface`, curve straightening in `geodesics`, leaf
tracing and cylinder decompositions in `cylinders`, stock builders in
`examples`.  This module re-exports their public names so callers can
reach the whole layer through one import.
"""

from .cylinders import (
    Band,
    Cylinder,
    CylinderDecomposition,
    StripResult,
    cylinder_decomposition,
    maximal_embedded_strip,
    trace_closed_leaf,
    trace_ray,
)
from .examples import make_example_surface
from .geodesics import GeodesicRep, check_crossings, tighten
from .surface import (
    FlatSurface,
    Gluing,
    ValidationReport,
    VertexClass,
)

__all__ = [
    "Band",
    "Cylinder",
    "CylinderDecomposition",
    "FlatSurface",
    "GeodesicRep",
    "Gluing",
    "StripResult",
    "ValidationReport",
    "VertexClass",
    "check_crossings",
    "cylinder_decomposition",
    "make_example_surface",
    "maximal_embedded_strip",
    "tighten",
    "trace_closed_leaf",
    "trace_ray",
]
