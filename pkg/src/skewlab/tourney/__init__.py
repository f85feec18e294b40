from .graphs import (
    MAX_VERTICES,
    Digraph,
    HomogeneousWitness,
    Tournament,
    WitnessKind,
    format_digraph,
    lexicographic_power,
    lexicographic_product,
    parse_digraph,
    verify_witness,
)
from .solvers import (
    TooLarge,
    best_homogeneous,
    es_common_monotone,
    hom_exact,
    longest_monotone,
    max_complete,
    max_independent,
    max_transitive,
    trans_exact,
)

__all__ = [
    "MAX_VERTICES",
    "Digraph",
    "HomogeneousWitness",
    "Tournament",
    "WitnessKind",
    "TooLarge",
    "best_homogeneous",
    "es_common_monotone",
    "format_digraph",
    "hom_exact",
    "lexicographic_power",
    "lexicographic_product",
    "longest_monotone",
    "max_complete",
    "max_independent",
    "max_transitive",
    "parse_digraph",
    "trans_exact",
    "verify_witness",
]
