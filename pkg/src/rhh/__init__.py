"""Homogeneous structures on real hyperbolic space RH(n).

Build the transitive descriptions of RH(n) from abstract holonomy data,
compute their homogeneous tensors and holonomy algebras, classify the
tensors into the types T1, T2, T3 and verify the Ambrose-Singer equations.
"""

__version__ = "0.1.0"

from .holonomy import enumerate_admissible, holonomy_from_brackets, predicted_holonomy
from .hyperbolic_model import build_so_n1, iwasawa, symmetric_structure
from .structure import HomogeneousStructure, Tensor3
from .structure_builder import (
    StructureSpec,
    build_structure,
    homogeneous_tensor,
    scale_phi,
    tensor_components,
)
from .tv_classifier import classify, component_space_dims, invariant_submodule_dim
from .verifier import check_ambrose_singer, nomizu_reconstruct, riemann_curvature

__all__ = [
    "HomogeneousStructure",
    "StructureSpec",
    "Tensor3",
    "build_so_n1",
    "build_structure",
    "check_ambrose_singer",
    "classify",
    "component_space_dims",
    "enumerate_admissible",
    "holonomy_from_brackets",
    "homogeneous_tensor",
    "invariant_submodule_dim",
    "iwasawa",
    "nomizu_reconstruct",
    "predicted_holonomy",
    "riemann_curvature",
    "scale_phi",
    "symmetric_structure",
    "tensor_components",
]
