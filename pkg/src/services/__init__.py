"""Constructions, counting, bounds, searches and verification services."""

from src.services.bounds import c4_regime, improved_lower_bound, plain_lower_bound
from src.services.counting import count_c4, count_k2t, count_kab
from src.services.difference_sets import (
    completion_elements,
    development,
    non_completion_structure,
    singer_difference_set,
)
from src.services.finite_field import FiniteField, field_create, galois_field
from src.services.groups import build_cayley_bipartite, psi2, psi2_search
from src.services.mors import build_mors, verify_mors
from src.services.oracle import bound_vs_oracle_table, check_plane_supergraph, min_c4_exhaustive

__all__ = [
    "FiniteField",
    "bound_vs_oracle_table",
    "build_cayley_bipartite",
    "build_mors",
    "c4_regime",
    "check_plane_supergraph",
    "completion_elements",
    "count_c4",
    "count_k2t",
    "count_kab",
    "development",
    "field_create",
    "galois_field",
    "improved_lower_bound",
    "min_c4_exhaustive",
    "non_completion_structure",
    "plain_lower_bound",
    "psi2",
    "psi2_search",
    "singer_difference_set",
    "verify_mors",
]
