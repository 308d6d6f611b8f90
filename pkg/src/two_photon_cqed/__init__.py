"""Two-photon cavity-QED entanglement protocols: closed-form dynamics, post-selection and time optimization."""

__version__ = "0.1.0"

from two_photon_cqed.dynamics import (
    ManifoldPropagator,
    alpha_n,
    compose,
    gamma_n,
    lambda_n,
    manifold_propagator,
)
from two_photon_cqed.metrics import (
    TargetState,
    fidelity_no_detection,
    fidelity_post_selected,
    target_epr,
    target_w_two_photon,
    target_w_zeta,
)
from two_photon_cqed.optimizer import (
    OptimizationResult,
    SweepRecord,
    SweepResult,
    optimize_times,
    sweep,
)
from two_photon_cqed.oracle import ManifoldAmplitudes, integrate_manifold
from two_photon_cqed.protocol import (
    CollapsedState,
    JointState,
    ProtocolSpec,
    apply_cavity_pass,
    epr_protocol,
    make_initial_state,
    make_product_state,
    project_atom,
    run_protocol,
    rydberg_params,
    w_protocol,
)
from two_photon_cqed.types import (
    AtomLevel,
    CavityPass,
    ConfigError,
    DomainError,
    EmptyBranchError,
    FrequencyConvention,
    ManifoldIndex,
    NoFeasiblePointError,
    Objective,
    PhysicalParams,
)

__all__ = [
    "AtomLevel",
    "CavityPass",
    "CollapsedState",
    "ConfigError",
    "DomainError",
    "EmptyBranchError",
    "FrequencyConvention",
    "JointState",
    "ManifoldAmplitudes",
    "ManifoldIndex",
    "ManifoldPropagator",
    "NoFeasiblePointError",
    "Objective",
    "OptimizationResult",
    "PhysicalParams",
    "ProtocolSpec",
    "SweepRecord",
    "SweepResult",
    "TargetState",
    "__version__",
    "alpha_n",
    "apply_cavity_pass",
    "compose",
    "epr_protocol",
    "fidelity_no_detection",
    "fidelity_post_selected",
    "gamma_n",
    "integrate_manifold",
    "lambda_n",
    "make_initial_state",
    "make_product_state",
    "manifold_propagator",
    "optimize_times",
    "project_atom",
    "run_protocol",
    "rydberg_params",
    "sweep",
    "target_epr",
    "target_w_two_photon",
    "target_w_zeta",
    "w_protocol",
]
