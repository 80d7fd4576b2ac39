"""Concrete semigroup backends: graph chains, Fourier lattices, deformed tori, cocycles."""

from .cocycle import (
    CnCheckResult,
    CocycleData,
    FiniteGroup,
    boolean_cube_group,
    cocycle_from_psi,
    conditionally_negative_check,
    cyclic_group,
    dihedral_group,
    direct_product,
    hamming_psi,
    random_cn_psi,
    read_group_table,
    zero_sum_form,
)
from .fourier import (
    FourierElement,
    FourierModel,
    frequency_grid,
    grid_values,
    grid_values_batch,
    integer_group_model,
    torus_model,
)
from .graphs import (
    complete_graph,
    cycle_graph,
    hypercube_graph,
    path_graph,
    read_edge_list,
    weighted_graph,
)
from .qtorus import (
    OperatorNormResult,
    QuantumTorusElement,
    qt_from_json,
    qt_norm_batch,
    qt_operator_norm,
    qt_represent,
    qt_to_json,
    quantum_torus_element,
)

__all__ = [
    "CnCheckResult",
    "CocycleData",
    "FiniteGroup",
    "FourierElement",
    "FourierModel",
    "OperatorNormResult",
    "QuantumTorusElement",
    "boolean_cube_group",
    "cocycle_from_psi",
    "complete_graph",
    "conditionally_negative_check",
    "cycle_graph",
    "cyclic_group",
    "dihedral_group",
    "direct_product",
    "frequency_grid",
    "grid_values",
    "grid_values_batch",
    "hamming_psi",
    "hypercube_graph",
    "integer_group_model",
    "path_graph",
    "qt_from_json",
    "qt_norm_batch",
    "qt_operator_norm",
    "qt_represent",
    "qt_to_json",
    "quantum_torus_element",
    "random_cn_psi",
    "read_edge_list",
    "read_group_table",
    "weighted_graph",
    "zero_sum_form",
]
