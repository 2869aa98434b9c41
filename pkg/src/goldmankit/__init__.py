"""goldmankit: trace-bracket identities and exotic G2 observables, verified.

Library + CLI that builds normalized Lie-algebra bases and their Casimir
tensors for the GL/U/SL/SU/Sp/SO families and the 14-dimensional exceptional
group acting on imaginary octonions, numerically verifies every bracket
identity relating (1/2) tr_12[(A (x) B) Gamma] to resolved-loop traces, and
manipulates the resulting gauge-invariant observables symbolically.
"""

from .bases import (
    Family,
    LieBasis,
    build_basis,
    check_normalization,
    closure_rank,
    gell_mann,
    symplectic_form,
)
from .casimir import (
    CasimirTensor,
    casimir_tensor,
    closed_form,
    defect_matrix,
    verify_closed_form,
    verify_tensor_lemmas,
)
from .goldman import (
    GroupElement,
    bracket_sides,
    sample_element,
    split_harness,
    verify_bracket,
    verify_defect,
    verify_symplectic_inverse,
)
from .linalg import Tolerance, kron, mat_exp, max_abs, permutation_matrix, trace12
from .observables import (
    ObservableInstance,
    ObservableSpec,
    enumerate_specs,
    evaluate,
    invariance_test,
    random_instance,
    spec_count,
    validate_spec,
)
from .octonions import (
    Octonion,
    automorphism_residual,
    conjugation_residual,
    oct_mul,
    structure_residual,
    unit_matrices,
)
from .reports import VerificationReport

__version__ = "0.1.0"
