"""Probabilistic entanglement concentration of a two-mode squeezed ladder.

Two conditional schemes act on a single copy of the geometric Schmidt ladder
c_n = sqrt(1 - lam^2) lam^n: a dispersive two-level filter whose detection
reshapes the ladder with sin((n phi - phi0)/2), and a cross-Kerr coherent
probe whose homodyne outcome beta both reshapes the ladder and is itself
distributed by a computable Q function.  The package evaluates success
probabilities, output entanglement, and continuous-variable teleportation
fidelities for both, on deterministic grids suitable for byte-stable export.
"""

from .analysis import (
    OptimumReport,
    SweepResult,
    optimize_phi0,
    sweep_cavity_phi0,
    sweep_kerr_threshold,
    sweep_to_csv,
)
from .cavity import (
    AtomFieldState,
    CavityParams,
    cavity_filter,
    cavity_schmidt,
    cavity_success_prob_analytic,
    evolve_atom_field,
)
from .errors import (
    ConcentrationError,
    EmptyRegionError,
    TruncationError,
    ZeroProbabilityError,
)
from .fock import (
    DiagonalFilter,
    SchmidtState,
    apply_filter,
    canonicalize_phase,
    default_n_max,
    fit_phase_ramp,
    tmsv_entropy_analytic,
    tmsv_state,
    von_neumann_entropy,
)
from .kerr import (
    GridScan,
    GridSpec,
    KerrParams,
    LinearizationReport,
    Outcome,
    PhaseRegion,
    average_fidelity,
    average_teleport_fidelity,
    baseline_fidelity,
    build_region,
    coherent_overlap,
    coherent_overlap_log,
    conditional_state,
    fidelity_to_phi_n,
    full_grid_region,
    linearization_diagnostics,
    q_function,
    region_summary,
    scan_grid,
    scan_to_csv,
    success_probability,
)
from .teleport import (
    FidelityResult,
    cavity_teleport_fidelity_analytic,
    teleport_fidelity,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ConcentrationError",
    "TruncationError",
    "ZeroProbabilityError",
    "EmptyRegionError",
    "SchmidtState",
    "DiagonalFilter",
    "tmsv_state",
    "default_n_max",
    "apply_filter",
    "von_neumann_entropy",
    "tmsv_entropy_analytic",
    "fit_phase_ramp",
    "canonicalize_phase",
    "CavityParams",
    "AtomFieldState",
    "cavity_filter",
    "cavity_schmidt",
    "cavity_success_prob_analytic",
    "evolve_atom_field",
    "FidelityResult",
    "teleport_fidelity",
    "cavity_teleport_fidelity_analytic",
    "KerrParams",
    "Outcome",
    "GridSpec",
    "GridScan",
    "PhaseRegion",
    "LinearizationReport",
    "coherent_overlap",
    "coherent_overlap_log",
    "q_function",
    "conditional_state",
    "fidelity_to_phi_n",
    "baseline_fidelity",
    "linearization_diagnostics",
    "scan_grid",
    "scan_to_csv",
    "build_region",
    "full_grid_region",
    "success_probability",
    "average_fidelity",
    "average_teleport_fidelity",
    "region_summary",
    "SweepResult",
    "OptimumReport",
    "sweep_cavity_phi0",
    "optimize_phi0",
    "sweep_kerr_threshold",
    "sweep_to_csv",
]
