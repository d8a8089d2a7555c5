"""Uncertainty bounds for distinguishing quantum states.

The central object is the dimensionless uncertainty of an observable
theta over a pair of states (rho, sigma),

    U = (Var_rho(theta) + Var_sigma(theta)) / ((1/2) (mean gap)^2),

which is bounded below by f(S) where S is the symmetric quantum
relative entropy of the pair and f is the inverse of a closed-form
divergence function.  The package evaluates both sides, the classical
surrogate chain that proves the bound, the saturating families, and
the specializations to quantum channels and to entropy production in
system-environment processes.

Hot kernels (the Jacobi eigensolver) run from a compiled extension
when available, with a pure-Python fallback selected at import time;
see qrebound._kernels.
"""

__version__ = "0.1.0"

from . import errors
from ._kernels import active_backend, available_backends, set_backend
from .bounds import (
    divergence_bound,
    divergence_bound_log_form,
    exchange_divergence,
    inverse_exchange_divergence,
    uncertainty_bound,
)
from .channels import (
    KrausChannel,
    amplitude_damping,
    apply_channel,
    dephasing_channel,
    depolarizing,
    dpi_margin,
    fixed_point_bound,
    identity_channel,
)
from .classical import (
    ClassicalEnsemble,
    cauchy_schwarz_chain,
    classical_tur,
    discrete_kl,
    exchange_ensemble,
    mixture_stats,
    random_ensemble,
    symmetric_kl,
    tanh_bound,
    variance_decomposition,
)
from .divergences import (
    classical_symmetric_divergence,
    coherence,
    dephase,
    relative_entropy,
    symmetric_relative_entropy,
    unitary_conjugate,
    von_neumann_entropy,
)
from .hermitian import (
    DensityMatrix,
    Observable,
    SpectralDecomposition,
    eig_hermitian,
    expectation,
    partial_trace,
    second_moment,
    tensor,
    variance,
)
from .montecarlo import (
    ExperimentResult,
    RunRecord,
    SampleParams,
    run_experiment,
    saturation_family,
)
from .sampling import (
    default_rng,
    random_density,
    random_kraus,
    random_observable,
    random_unitary,
)
from .surrogate import (
    SurrogateDistribution,
    UncertaintyReport,
    build_surrogate,
    classical_uncertainty,
    quantum_uncertainty,
    surrogate_divergences,
    uncertainty_report,
)
from .thermo import (
    FluxCapacityReport,
    ThermoProcess,
    TrajectoryEnsemble,
    entropy_production,
    flux_capacity_relation,
    process_uncertainty,
    random_process,
    trajectory_production,
)
from .verify import SUITE_CHOICES, CheckResult, run_suite

__all__ = [
    "__version__",
    "errors",
    "active_backend",
    "available_backends",
    "set_backend",
    "divergence_bound",
    "divergence_bound_log_form",
    "exchange_divergence",
    "inverse_exchange_divergence",
    "uncertainty_bound",
    "KrausChannel",
    "amplitude_damping",
    "apply_channel",
    "dephasing_channel",
    "depolarizing",
    "dpi_margin",
    "fixed_point_bound",
    "identity_channel",
    "ClassicalEnsemble",
    "cauchy_schwarz_chain",
    "classical_tur",
    "discrete_kl",
    "exchange_ensemble",
    "mixture_stats",
    "random_ensemble",
    "symmetric_kl",
    "tanh_bound",
    "variance_decomposition",
    "classical_symmetric_divergence",
    "coherence",
    "dephase",
    "relative_entropy",
    "symmetric_relative_entropy",
    "unitary_conjugate",
    "von_neumann_entropy",
    "DensityMatrix",
    "Observable",
    "SpectralDecomposition",
    "eig_hermitian",
    "expectation",
    "partial_trace",
    "second_moment",
    "tensor",
    "variance",
    "ExperimentResult",
    "RunRecord",
    "SampleParams",
    "run_experiment",
    "saturation_family",
    "default_rng",
    "random_density",
    "random_kraus",
    "random_observable",
    "random_unitary",
    "SurrogateDistribution",
    "UncertaintyReport",
    "build_surrogate",
    "classical_uncertainty",
    "quantum_uncertainty",
    "surrogate_divergences",
    "uncertainty_report",
    "FluxCapacityReport",
    "ThermoProcess",
    "TrajectoryEnsemble",
    "entropy_production",
    "flux_capacity_relation",
    "process_uncertainty",
    "random_process",
    "trajectory_production",
    "SUITE_CHOICES",
    "CheckResult",
    "run_suite",
]
