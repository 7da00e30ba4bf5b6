"""Randomized Fourier phase estimation under exponential signal decay.

The package simulates the estimator (draw depth k, phase offset phi,
and a +/-1 outcome; accumulate a Fourier spectrum; decode the peak),
evaluates the analytical shot-count bound that certifies a target
failure probability, converts fault-tolerant code parameters into the
decay rate the estimator sees, and compares end-to-end resource costs
against textbook phase estimation.
"""

from .bounds import (
    BoundBreakdown,
    BoundInputs,
    VacuousBoundError,
    bound_validity,
    evaluate_bound,
    q_bound,
    r_bound,
    runtime_cu,
    s_bound,
    sample_bound,
    sweep_runtime_curves,
    w_ratio,
)
from .campaigns import (
    BoundValidationReport,
    CampaignManifest,
    CampaignSpec,
    run_campaign,
    spec_from_config,
    validate_bound,
)
from .config import ConfigError, RunConfig, canonical_text, parse_config
from .noise import (
    CircuitShape,
    DegenerateChannelError,
    DepolarizingChannel,
    FtModel,
    lambda_from_depolarizing,
    logical_rate,
    physical_qubits,
    stddev_heatmap,
    survival_probability,
    trajectory_variance,
)
from .resources import (
    CostReport,
    ProblemInstance,
    compare_sweep,
    qpe_ancillas,
    qpe_cu_calls,
    qpe_min_distance,
    rfe_cost_at_distance,
)
from .rfe import (
    EstimateResult,
    FourierSpectrum,
    RfeConfig,
    ShotRecord,
    choose_K,
    closed_form_peak_power,
    expected_spectrum,
    grid_size,
    outcome_probability,
    run_rfe,
    stream_rng,
    wrapped_distance,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # rfe
    "RfeConfig",
    "ShotRecord",
    "FourierSpectrum",
    "EstimateResult",
    "stream_rng",
    "outcome_probability",
    "run_rfe",
    "expected_spectrum",
    "closed_form_peak_power",
    "choose_K",
    "grid_size",
    "wrapped_distance",
    # bounds
    "BoundInputs",
    "BoundBreakdown",
    "VacuousBoundError",
    "q_bound",
    "r_bound",
    "s_bound",
    "w_ratio",
    "sample_bound",
    "runtime_cu",
    "evaluate_bound",
    "bound_validity",
    "sweep_runtime_curves",
    # noise
    "FtModel",
    "DepolarizingChannel",
    "CircuitShape",
    "DegenerateChannelError",
    "logical_rate",
    "physical_qubits",
    "survival_probability",
    "trajectory_variance",
    "lambda_from_depolarizing",
    "stddev_heatmap",
    # resources
    "ProblemInstance",
    "CostReport",
    "qpe_ancillas",
    "qpe_cu_calls",
    "qpe_min_distance",
    "rfe_cost_at_distance",
    "compare_sweep",
    # campaigns / config
    "CampaignSpec",
    "CampaignManifest",
    "BoundValidationReport",
    "run_campaign",
    "spec_from_config",
    "validate_bound",
    "RunConfig",
    "ConfigError",
    "parse_config",
    "canonical_text",
]
