"""Flat surfaces, extremal length, and conformal embedding certificates."""

from .errors import (
    FlatelError,
    Inconclusive,
    InputError,
    NotJSForCurve,
    NotLoose,
    NotPeriodic,
    TrivialCurve,
    ValidationError,
)
from .surface import FlatSurface, Gluing
from .curves import Component, MultiCurve, loop
from .examples import make_example_surface
from .extremal import ELInterval, el_cylinder, el_interval
from .covers import CoverSpec, build_cover, el_cover_check, pullback_curve
from .stretch import (
    Placement,
    StretchBound,
    SubsurfaceEmbedding,
    identity_embedding,
    sf_cover_report,
    sf_lower,
    sf_upper_loose,
    sf_upper_qc,
)
from .qdisk import DiskDifferential, area_q, parse_region

__all__ = [
    "FlatelError",
    "Inconclusive",
    "InputError",
    "NotJSForCurve",
    "NotLoose",
    "NotPeriodic",
    "TrivialCurve",
    "ValidationError",
    "FlatSurface",
    "Gluing",
    "Component",
    "MultiCurve",
    "loop",
    "make_example_surface",
    "ELInterval",
    "el_cylinder",
    "el_interval",
    "CoverSpec",
    "build_cover",
    "el_cover_check",
    "pullback_curve",
    "Placement",
    "StretchBound",
    "SubsurfaceEmbedding",
    "identity_embedding",
    "sf_cover_report",
    "sf_lower",
    "sf_upper_loose",
    "sf_upper_qc",
    "DiskDifferential",
    "area_q",
    "parse_region",
]
