"""Characteristic and fully invariant subgroups, inertia quotients and
automorphism-sum decompositions for finite abelian p-groups."""
from .core import (INF, Element, GroupShape, GroupSpecError, elem_add, elem_neg, elem_scale,
                   height, height_sequence, make_group, parse_element, parse_group, section,
                   ulm_factor_basis, ulm_invariant)
from .sublattice import (AlphaSequence, EnumerationBoundError, Subgroup, canonical_alpha,
                         commensurability_defect, contains, enumerate_subgroups, g_alpha,
                         index, join, meet, quotient_type, span)
from .homset import (AutCertificate, Homomorphism, add_homs, apply, aut_generators, compose,
                     endo_additive_generators, enumerate_autos, enumerate_endos,
                     is_automorphism, make_hom, random_auto, random_endo, scale_hom, shear,
                     square_maps)

__version__ = "0.1.0"
