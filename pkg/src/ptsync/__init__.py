"""Prescribed-time synchronization of multiweighted directed networks.

Spectral threshold analysis, scalar prescribed-time decay models, and
singular-gain ODE integration up to (never through) the prescribed time.
"""

from .benchmark import (
    BENCHMARK_ELL,
    BENCHMARK_ICMS,
    BENCHMARK_OCMS,
    BENCHMARK_PIN_GAIN,
    BENCHMARK_PIN_TARGET,
    BENCHMARK_T,
    BENCHMARK_X0,
    benchmark_network,
    benchmark_regulator,
)
from .config import RunConfig, benchmark_config_dict, load_config
from .dynamics import NodeDynamics, QuadCheck, saturation, verify_quad
from .errors import (
    AssumptionViolatedError,
    BlowupError,
    DegenerateKernelError,
    DimensionMismatchError,
    InvalidParametersError,
    MissingPinningError,
    NonFiniteStateError,
    NonPositiveEntryError,
    NonSquareError,
    NotNegativeDefiniteError,
    NotNegativeInTSError,
    NotSymmetricError,
    PtsyncError,
    StepUnderflowError,
    TimeOutOfRangeError,
    UnsupportedRegulatorError,
)
from .linalg import (
    SpectrumResult,
    is_strongly_connected,
    is_zero_row_sum,
    left_null_vector,
    symmetric_eigen,
)
from .network import (
    A1Verdict,
    MultiWeightNetwork,
    PinningConfig,
    SumMatrixSet,
    ValidationReport,
    assemble_stacked,
    build_sum_matrices,
    check_assumption_a1,
    compute_threshold,
    fiedler_lambda2,
    nlevecs,
)
from .regulator import Divergence, Regulator
from .scalar import (
    PhiClass,
    PhiValue,
    ScalarModel,
    ScalarTrajectory,
    classify_phi,
    closed_form,
    simulate_scalar,
)
from .simulate import (
    IntegratorConfig,
    Trajectory,
    error_e1,
    error_e2,
    eval_rhs,
    integrate,
)

__version__ = "1.0.0"
