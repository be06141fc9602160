"""Construction and verification of strongly nonlocal orthogonal product sets."""
from .certificates import Certificate, load_certificate, shipped_certificates
from .combinatorics import (
    PartySubset,
    ProjectionSet,
    Projections,
    ZgyReport,
    build_sequence,
    check_condition_i,
    check_connected,
    check_zgy,
    find_pi_set,
    has_upi,
    is_pi_set,
    projection_set,
    verify_strong_nonlocality,
)
from .constructions import (
    build,
    build_even,
    build_four_asym,
    build_four_sym,
    build_odd,
    computational_basis,
    count_states,
)
from .cyclotomic import Cyclotomic, ResourceLimitError, cyclo_arith, cyclo_is_zero
from .grid import build_grid, export_grid
from .povm import (
    assemble_constraints,
    solve_solution_space,
    verify_definition1,
    verify_pair_triviality,
)
from .serialize import load_ops, serialize_ops
from .states import Block, Dims, Factor, OPSInstance, ProductState, factor_inner, state_inner, verify_orthogonality

__version__ = "0.1.0"
