"""Quantum f-entropies and their exact continuity bounds in trace distance."""

from .bounds import (
    BoundQuery,
    BoundResult,
    audenaert_bound,
    extremal_family,
    extremal_pair,
    f_bound,
    f_bound_trace_t,
    modulus_of_continuity,
)
from .entropy import ConvexFunction, binary_entropy, builtin, custom, f_entropy, load_table, renyi, tabulated
from .linalg import EigenDecomposition, apply_function, eigh, trace_abs_half
from .majorization import (
    MajorizationCertificate,
    SimplexPair,
    decreasing_rearrangement,
    ky_fan_bracket,
    majorizes,
    order_statistic_via_subsets,
    reduction_step,
)
from .states import (
    DensityMatrix,
    from_probabilities,
    optimal_projector,
    random_density,
    trace_distance,
    validate_density,
)
from .verify import OracleResult, VerificationReport, oracle_max_Df, sample_check, sweep

__version__ = "0.1.0"
