"""Exponentially small separatrix splitting for the rapidly forced pendulum.

The library computes, for a zero-mean trigonometric forcing g, the
combinatorial degeneracy order n(g), the Stokes coefficient chi_n (closed
forms at orders 1 and 2, an e^rho-amplified two-branch extraction at any
order), the Melnikov function, and the leading asymptotic splitting term
with its error budget.
"""

from .harmonics import (
    BezoutOrder,
    DegeneracyReport,
    DuplicateHarmonic,
    EmptySpec,
    NonUnitGcd,
    NotCoprime,
    OrderExceedsBound,
    PerturbationSpec,
    SpecError,
    ZeroMeanViolation,
    bezout_order,
    degeneracy_order,
    sumset,
    sumset_ladder,
    truncation_cutoff,
    validate_spec,
)
from .inner_solver import (
    InnerState,
    MissingMode,
    ModeIndex,
    NoPlateau,
    NonDecayingAverage,
    SeedOutOfRange,
    SolverConfig,
    SolverError,
    StepSizeUnderflow,
    StokesEstimate,
    branch_path,
    chi_estimate,
    delta_in_first_order,
    derivative_recover,
    integrate_branch,
    integrate_branch_derivative_odes,
    mode_table,
    plateau_scan,
    rhs_convolution,
    rhs_order1,
    seed_series,
)
from .io import (
    ParseError,
    RunManifest,
    Table1Result,
    emit_spec,
    load_spec,
    run_table1,
    save_spec,
)
from .melnikov import (
    MelnikovEval,
    QuadratureBudgetExceeded,
    homoclinic,
    melnikov_closed,
    melnikov_quadrature,
)
from .series import InverseZSeries
from .splitting import (
    ASYMPTOTIC_VALID,
    DEGENERATE,
    ArnoldReport,
    ErrorBudget,
    OrderMismatch,
    SplittingEval,
    arnold_pipeline,
    dominance_check,
    splitting_leading,
)
from .stokes_analytic import (
    ANALYTIC,
    NUMERIC_PLATEAU,
    StokesCoefficient,
    chi1,
    chi2,
    g_squared_first_harmonic,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYTIC",
    "ASYMPTOTIC_VALID",
    "ArnoldReport",
    "BezoutOrder",
    "DEGENERATE",
    "DegeneracyReport",
    "DuplicateHarmonic",
    "EmptySpec",
    "ErrorBudget",
    "InnerState",
    "InverseZSeries",
    "MelnikovEval",
    "MissingMode",
    "ModeIndex",
    "NUMERIC_PLATEAU",
    "NoPlateau",
    "NonDecayingAverage",
    "NonUnitGcd",
    "NotCoprime",
    "OrderExceedsBound",
    "OrderMismatch",
    "ParseError",
    "PerturbationSpec",
    "QuadratureBudgetExceeded",
    "RunManifest",
    "SeedOutOfRange",
    "SolverConfig",
    "SolverError",
    "SpecError",
    "SplittingEval",
    "StepSizeUnderflow",
    "StokesCoefficient",
    "StokesEstimate",
    "Table1Result",
    "ZeroMeanViolation",
    "arnold_pipeline",
    "bezout_order",
    "branch_path",
    "chi1",
    "chi2",
    "chi_estimate",
    "degeneracy_order",
    "delta_in_first_order",
    "derivative_recover",
    "dominance_check",
    "emit_spec",
    "g_squared_first_harmonic",
    "homoclinic",
    "integrate_branch",
    "integrate_branch_derivative_odes",
    "load_spec",
    "melnikov_closed",
    "melnikov_quadrature",
    "mode_table",
    "plateau_scan",
    "rhs_convolution",
    "rhs_order1",
    "run_table1",
    "save_spec",
    "seed_series",
    "splitting_leading",
    "sumset",
    "sumset_ladder",
    "truncation_cutoff",
    "validate_spec",
]
