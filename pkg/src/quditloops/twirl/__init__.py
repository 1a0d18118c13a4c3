"""Heisenberg-Weyl expansion of non-Pauli errors and exact syndrome statistics."""
from .algebra import (
    ErrorModel,
    Expansion,
    PauliTerm,
    adjoint,
    builtin_unitary,
    clock,
    clock_rotation,
    expand_error,
    f_from_matrix,
    hw_operator,
    matrix_from_f,
    multiply,
    random_unitary,
    read_matrix_file,
    shift,
    term_matrix,
)
from .dense import dense_oracle, stabilizer_projector
from .distributions import (
    LOGICAL_Z_PLUS,
    coherent_distribution,
    pta_distribution,
    total_variation,
)
from .smith import kernel_mod, smith_normal_form
from .syndrome import (
    KernelInfo,
    SyndromeMap,
    check_matrices,
    invert_syndrome_on_forest,
    kernel_and_windings,
    schedule_measurements,
    syndrome_map,
)
