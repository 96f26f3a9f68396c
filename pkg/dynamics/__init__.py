"""
Set dynamics on graphs: MBO threshold dynamics, local flips, Allen-Cahn and mean curvature flow
"""
from .allen_cahn import (
    AcParams,
    AcPinningBounds,
    AcTrace,
    ac_pinning_bounds,
    ac_pinning_report,
    ac_rhs,
    ace_evolve,
    double_well,
    double_well_prime,
    gl_energy,
    invariant_ball_radius,
    trajectory_laplacian_sup,
)
from .flip import FlipAnalysis, flip_analysis, local_flip_interval, r1_corollary_conditions, star_flip_criterion
from .mbo import (
    MboParams,
    MboTrace,
    TauBounds,
    critical_tau_complete,
    critical_tau_star,
    lyapunov,
    mbo_run,
    mbo_step,
    pinned_below,
    relative_volume,
    tau_bounds,
    threshold,
    universal_pinning_tau,
)
from .mcf import (
    McfParams,
    McfStepResult,
    SubgradientCertificate,
    brute_force_minimizer,
    coarea_identity,
    convex_relaxation_solve,
    functional_shift,
    is_dt_minimal,
    mcf_functional,
    mcf_run,
    mcf_step,
    mcf_trajectory,
    reduced_functional,
    relaxation_objective,
    subgradient_certificate,
)

__all__ = [
    "AcParams",
    "AcPinningBounds",
    "AcTrace",
    "FlipAnalysis",
    "MboParams",
    "MboTrace",
    "McfParams",
    "McfStepResult",
    "SubgradientCertificate",
    "TauBounds",
    "ac_pinning_bounds",
    "ac_pinning_report",
    "ac_rhs",
    "ace_evolve",
    "brute_force_minimizer",
    "coarea_identity",
    "convex_relaxation_solve",
    "critical_tau_complete",
    "critical_tau_star",
    "double_well",
    "double_well_prime",
    "flip_analysis",
    "functional_shift",
    "gl_energy",
    "invariant_ball_radius",
    "is_dt_minimal",
    "local_flip_interval",
    "lyapunov",
    "mbo_run",
    "mbo_step",
    "mcf_functional",
    "mcf_run",
    "mcf_step",
    "mcf_trajectory",
    "pinned_below",
    "r1_corollary_conditions",
    "reduced_functional",
    "relative_volume",
    "relaxation_objective",
    "star_flip_criterion",
    "subgradient_certificate",
    "tau_bounds",
    "threshold",
    "trajectory_laplacian_sup",
    "universal_pinning_tau",
]
