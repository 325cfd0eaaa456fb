"""Regularity of point schemes in products of projective spaces over F_p."""
from __future__ import annotations

from .formulas import (
    PreconditionError,
    bound_report,
    fat_bound,
    reduced_regularity_formula,
    ri_bound,
)
from .groebner import Ideal, IdealError, Quotient, colon, intersect, min_gen_degrees
from .hilbert import graded_hilbert, hilbert_polynomial_empirical, multigraded_hilbert, regularity_index
from .linalg import BACKEND
from .points import GenericityError, Point, PointScheme, fat_point_ideal, point_ideal, random_points
from .regularity import generic_initial_ideal, is_m_regular, regularity, regularity_via_gin
from .ring import FieldSpec, Polynomial, SpaceShape

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FieldSpec",
    "GenericityError",
    "Ideal",
    "IdealError",
    "Point",
    "PointScheme",
    "Polynomial",
    "PreconditionError",
    "Quotient",
    "SpaceShape",
    "bound_report",
    "colon",
    "fat_bound",
    "fat_point_ideal",
    "generic_initial_ideal",
    "graded_hilbert",
    "hilbert_polynomial_empirical",
    "intersect",
    "is_m_regular",
    "min_gen_degrees",
    "multigraded_hilbert",
    "point_ideal",
    "random_points",
    "reduced_regularity_formula",
    "regularity",
    "regularity_index",
    "regularity_via_gin",
    "ri_bound",
]
