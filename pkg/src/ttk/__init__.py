"""Executable tournament combinatorics: canonical forms, homogeneous sets,
galaxies, index-tagged products, m-sequences and strong pairs."""

from .decomposition import find_nontrivial_homogeneous, homogeneous_closure, is_prime, substitute
from .galaxy import CapabilityError, build_star, find_galaxy_ordering, is_galaxy_ordering
from .iso import are_isomorphic, canonical_form, contains_induced, enumerate_up_to_iso
from .product import IndexedTournament, ShapeVector, eh_extension_check, product
from .tournament import (
    Tournament,
    backward_graph,
    complement,
    density,
    from_backward_edges,
    induced,
    is_transitive,
    tr_exact,
)

__all__ = [
    "CapabilityError", "IndexedTournament", "ShapeVector", "Tournament", "are_isomorphic",
    "backward_graph", "build_star", "canonical_form", "complement", "contains_induced",
    "density", "eh_extension_check", "enumerate_up_to_iso", "find_galaxy_ordering",
    "find_nontrivial_homogeneous", "from_backward_edges", "homogeneous_closure", "induced",
    "is_galaxy_ordering", "is_prime", "is_transitive", "product", "substitute", "tr_exact",
]
