"""Bivariate polynomials: pairings, classification, rotation matrix, polar decomposition."""

from .algebra import (
    CheckFailed,
    Classification,
    FormKind,
    NotIrreducible,
    SpectralReport,
    ZeroPolynomial,
    binomial_null_vector,
    classify,
    divides,
    divmod_poly,
    exchange_matrix,
    form_from_vector,
    form_vector,
    is_square_free,
    radial_pairing,
    spectral_checks,
    spectral_matrix,
    tangential_pairing,
)
from .bivar import BivarPoly, poly
from .polar import (
    ExceptionalRay,
    NotGeneric,
    PolarArc,
    PolarDecomposition,
    SingularityCluster,
    TracerStalled,
    VerificationReport,
    polar_decompose,
    rhs_member,
    semigroup_witness_arc,
    verify_decomposition,
    verify_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
