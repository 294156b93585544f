"""Steady-state entanglement of two optical cavity modes coupled to a mechanical
resonator, with a degenerate optical parametric amplifier inside the cavity."""

__version__ = "0.1.0"

from .model import (
    AmplitudeModel,
    DerivedParams,
    DetuningMode,
    PhysicalParams,
    SteadyState,
    derive_constants,
    paper_params,
    solve_steady_state,
    steady_amplitude_exact,
    steady_amplitude_paper,
)
from .dynamics import (
    LinearModel,
    build_diffusion,
    build_drift,
    build_linear_model,
    is_stable,
    routh_hurwitz_stable,
    spectral_abscissa,
)
from .lyapunov import CovarianceMatrix, solve_lyapunov
from .entanglement import (
    EntanglementReport,
    cavity_block,
    entanglement_report,
    log_negativity,
    partial_transpose_mode2,
    squeezing_ratios,
    symplectic_eigenvalues_2mode,
    symplectic_spectrum,
)
from .experiments import (
    OptimalGainResult,
    SweepRecord,
    evaluate_point,
    optimal_gain,
    optimal_gain_vs_temperature,
    sweep_gain,
    sweep_ratios,
    sweep_theta,
)
from . import errors
