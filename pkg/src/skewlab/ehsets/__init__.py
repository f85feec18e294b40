"""Difference graphs of point sets and homogeneous-substructure extraction."""

from .extract import (
    BadRadii,
    Extraction,
    NoStrategy,
    NotASemigroup,
    ceil_sqrt,
    extract_bounded,
    extract_expr,
    extract_semigroup,
    lower,
    verify_extraction,
)
from .sets import (
    Annulus,
    Ball,
    Complement,
    Cone,
    Custom,
    Diffs,
    Empty,
    Halfplane,
    Intersection,
    OracleUndefined,
    Orthant,
    PointSet,
    PolySign,
    RayFrom,
    RayRestricted,
    SetExpr,
    SetMinus,
    SymmetricDifference,
    Union,
    expr_from_json,
    gamma_graph,
    product_sign_expr,
)

__all__ = [name for name in dir() if not name.startswith("_")]
