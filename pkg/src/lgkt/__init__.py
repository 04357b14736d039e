"""K-theory of labelled graph C*-algebras by exact integer linear algebra.

The pipeline: a finite labelled graph is refined into its tower of
generalized-vertex partitions; the inclusion and transfer-difference
matrices of that tower (or of an abstract level system, or of an explicit
accommodating set family) are reduced by Smith normal form; K1 is the
kernel side, K0 the cokernel side, with non-stabilizing towers classified
as direct limits.
"""

from .covers import CoverResult, predecessor_cover, trim_essential
from .engine import (FamilyBasis, KTheoryResult, graph_algebra_ktheory,
                     inclusion_matrix, ktheory_explicit_family,
                     ktheory_of_labelled_graph, one_minus_phi_matrix)
from .graphs import (LabelledGraph, ValidationReport, build_e0minus,
                     make_graph, outgoing_labels, parse_graph, relative_range,
                     serialize_graph, validate_family, validate_graph)
from .levels import (GeneratorSpec, LevelSystem, builtin_generator,
                     from_symbolic_matrix_system, limit_ktheory,
                     parse_level_system, validate_levels)
from .partitions import (Partition, PartitionTower, class_relative_range,
                         lambda_set, refine_tower)
from .zmodule import (FGAbelianGroup, GroupHom, IntMatrix, LimitGroup,
                      SmithDecomposition, cokernel_presentation, direct_limit,
                      induced_hom, invariant_factors, is_split_injective,
                      kernel_basis, kernel_group, smith_normal_form)

__version__ = "0.1.0"

__all__ = [
    "CoverResult", "FGAbelianGroup", "FamilyBasis", "GeneratorSpec",
    "GroupHom", "IntMatrix", "KTheoryResult", "LabelledGraph", "LevelSystem",
    "LimitGroup", "Partition", "PartitionTower", "SmithDecomposition",
    "ValidationReport", "build_e0minus", "builtin_generator",
    "class_relative_range", "cokernel_presentation", "direct_limit",
    "from_symbolic_matrix_system", "graph_algebra_ktheory", "inclusion_matrix",
    "induced_hom", "invariant_factors", "is_split_injective", "kernel_basis",
    "kernel_group", "ktheory_explicit_family", "ktheory_of_labelled_graph",
    "lambda_set", "limit_ktheory", "make_graph", "one_minus_phi_matrix",
    "outgoing_labels", "parse_graph", "parse_level_system",
    "predecessor_cover", "refine_tower", "relative_range", "serialize_graph",
    "smith_normal_form", "trim_essential", "validate_family",
    "validate_graph", "validate_levels",
]
