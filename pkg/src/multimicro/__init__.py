"""Exact polyhedral geometry for multi-specialization and multi-microlocalization."""

from __future__ import annotations

__version__ = "0.1.0"

from .cones import Cone, Polyhedron, PolySet
from .deformation import MonomialScheme, scheme_for_dual, scheme_from_family
from .degrees import RealComplexSplit, degree_complex, degree_general
from .errors import (
    ConstructionError,
    EmptyError,
    InputError,
    InternalConsistencyError,
    MultimicroError,
    NonPolyhedralError,
    PreconditionError,
    ResourceError,
    SearchFailure,
)
from .indices import IndexFamily, derive, majima, mixed_r3, restrict, takeuchi, validate
from .multinormal import mnc_describe, mnc_member, oracle_member

__all__ = [
    "__version__",
    "Cone",
    "Polyhedron",
    "PolySet",
    "MonomialScheme",
    "scheme_for_dual",
    "scheme_from_family",
    "RealComplexSplit",
    "degree_complex",
    "degree_general",
    "ConstructionError",
    "EmptyError",
    "InputError",
    "InternalConsistencyError",
    "MultimicroError",
    "NonPolyhedralError",
    "PreconditionError",
    "ResourceError",
    "SearchFailure",
    "IndexFamily",
    "derive",
    "majima",
    "mixed_r3",
    "restrict",
    "takeuchi",
    "validate",
    "mnc_describe",
    "mnc_member",
    "oracle_member",
]
