"""Computational toolkit for semi-regular right-angled buildings.

Chambers are elements of a graph product of cyclic groups; on top of that sit
projections, parallelism, wings, constructive automorphisms, and a seeded
property-checking harness.
"""

from .chambers import BuildingSpec, Chamber, inverse, j_prefix, mult, normalize, random_chamber, weyl_distance
from .coxeter import (
    INF,
    ONE_ENDED,
    CoxeterDiagram,
    HalfSpace,
    OneEnded,
    Partition,
    WeylWord,
    deep_corner_search,
    ends_classify,
    validate_diagram,
)
from .geometry import (
    Ball,
    Residue,
    ResourceLimit,
    Wing,
    ball,
    grow_apartment,
    is_convex,
    is_parallel,
    minimal_galleries,
    panel,
    proj_chamber,
    proj_residue,
    residue_of,
    standard_apartment,
    wall_residue,
    wing_contains,
    wing_included,
)
from .kernel import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Ball",
    "BuildingSpec",
    "Chamber",
    "CoxeterDiagram",
    "HalfSpace",
    "INF",
    "ONE_ENDED",
    "OneEnded",
    "Partition",
    "Residue",
    "ResourceLimit",
    "WeylWord",
    "Wing",
    "ball",
    "deep_corner_search",
    "ends_classify",
    "grow_apartment",
    "inverse",
    "is_convex",
    "is_parallel",
    "j_prefix",
    "minimal_galleries",
    "mult",
    "normalize",
    "panel",
    "proj_chamber",
    "proj_residue",
    "random_chamber",
    "residue_of",
    "standard_apartment",
    "validate_diagram",
    "wall_residue",
    "wing_contains",
    "wing_included",
    "weyl_distance",
]
