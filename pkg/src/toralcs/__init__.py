"""Abelian Chern-Simons invariants built from an even lattice."""

from .errors import ToralError
from .gaussian import fresnel, fresnel_factor, fresnel_quadrature_oracle, kron_factorize
from .lattice import (DiscGroup, EvenLattice, discriminant_group, gauss_sum,
                      validate_even_lattice)
from .manifolds import Presentation, handle_slide, homology, kirby_stabilize
from .tqft import (boundary_space, cylinder_scalar, glue_trace, partition,
                   z_torsion_decomposition, z_standard, z_surgery)
from .values import PartitionValue
from .weil import McgWord, ModularData, mapping_torus_trace, modular_data

__all__ = [
    "ToralError", "fresnel", "fresnel_factor", "fresnel_quadrature_oracle", "kron_factorize",
    "DiscGroup", "EvenLattice", "discriminant_group", "gauss_sum", "validate_even_lattice",
    "Presentation", "handle_slide", "homology", "kirby_stabilize",
    "boundary_space", "cylinder_scalar", "glue_trace", "partition",
    "z_torsion_decomposition", "z_standard", "z_surgery",
    "PartitionValue", "McgWord", "ModularData", "mapping_torus_trace", "modular_data",
]
