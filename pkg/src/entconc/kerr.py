"""Cross-Kerr probe readout: measurement-conditioned ladders on a beta grid.

One mode of the shared state is coupled to a bright coherent probe |alpha>
(alpha real, > 0) through a cross-Kerr interaction, rotating the probe to
|alpha e^{i n phi}> when the mode holds n photons.  An eight-port homodyne
measurement of the probe then yields a complex outcome beta with density
(the Husimi Q function of the reduced probe state)

    Q(beta) = (1-lam^2)/pi sum_n lam^{2n} exp(-|alpha e^{i n phi} - beta|^2)

and leaves the ladder in the conditional state with amplitudes

    d_n(beta) ~ c_n <beta|alpha e^{i n phi}>,

where <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha).  A
feedforward phase shift proportional to Re(beta) removes the linear part of
the outcome-dependent phase ramp.  Amplitudes are computed in log space with
the maximal exponent subtracted, then normalized numerically.

Quality of an outcome is judged by overlap with the uniform maximally
entangled ladder on the first cut+1 levels,

    F(beta) = |sum_{n<=cut} d_n(beta)|^2 / (cut + 1),

and outcomes are aggregated over the acceptance region
Omega = {beta : F(beta) >= F_baseline + delta_F} by deterministic midpoint
quadrature on a fixed square grid in (x, y) = beta - alpha.  Monte Carlo
sampling of beta is deliberately out of scope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._util import csv_text, wrap_angle
from .errors import EmptyRegionError
from .fock import SchmidtState, tmsv_state

__all__ = [
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
]


@dataclass(frozen=True)
class KerrParams:
    """Scheme parameters: squeezing, probe amplitude, per-photon probe phase.

    n_max is the ladder cutoff used for conditional states (must leave room
    above the TMSV occupation: measurement back-action can push weight to
    higher n than the input state holds).  fock_cut is the N of the uniform
    comparison ladder.
    """

    lam: float
    alpha: float
    phi: float
    n_max: int = 128
    fock_cut: int = 10

    def __post_init__(self):
        lam = float(self.lam)
        alpha = float(self.alpha)
        n_max = int(self.n_max)
        fock_cut = int(self.fock_cut)
        if not 0.0 <= lam < 1.0:
            raise ValueError(f"squeezing parameter must satisfy 0 <= lam < 1, got {lam!r}")
        if not alpha > 0.0:
            raise ValueError(f"probe amplitude must be positive, got {alpha!r}")
        if n_max < 1:
            raise ValueError("n_max must be at least 1")
        if not 0 <= fock_cut <= n_max:
            raise ValueError(f"fock_cut must lie in [0, n_max], got {fock_cut!r}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "phi", wrap_angle(self.phi))
        object.__setattr__(self, "n_max", n_max)
        object.__setattr__(self, "fock_cut", fock_cut)


@dataclass(frozen=True)
class Outcome:
    """A single eight-port homodyne outcome beta."""

    beta: complex

    @property
    def magnitude(self) -> float:
        return abs(self.beta)

    @property
    def phi0(self) -> float:
        """Outcome phase arg(beta) in (-pi, pi]."""
        return wrap_angle(cmath.phase(self.beta))


@dataclass(frozen=True)
class GridSpec:
    """Uniform square outcome grid in (x, y) = beta - alpha.

    half_width >= 4 keeps the window wide enough that the probe Q function
    integrates to ~1 inside it; step <= 0.2 keeps midpoint quadrature honest.
    Both endpoints are included: linspace(-hw, hw, round(2 hw / step) + 1).
    """

    half_width: float = 5.0
    step: float = 0.1

    def __post_init__(self):
        hw = float(self.half_width)
        step = float(self.step)
        if hw < 4.0:
            raise ValueError(f"half_width must be >= 4, got {hw!r}")
        if not 0.0 < step <= 0.2:
            raise ValueError(f"step must lie in (0, 0.2], got {step!r}")
        object.__setattr__(self, "half_width", hw)
        object.__setattr__(self, "step", step)

    @property
    def points_per_axis(self) -> int:
        return int(round(2.0 * self.half_width / self.step)) + 1

    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points_per_axis)

    @property
    def actual_step(self) -> float:
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat (x, y) arrays in the fixed traversal order: y outer, x inner."""
        ax = self.axis()
        yy, xx = np.meshgrid(ax, ax, indexing="ij")
        return xx.ravel(), yy.ravel()


@dataclass(frozen=True, eq=False)
class GridScan:
    """Per-point figures of merit over one grid, in traversal order."""

    params: KerrParams
    grid: GridSpec
    x: np.ndarray
    y: np.ndarray
    q: np.ndarray
    f_cut: np.ndarray
    f_teleport: np.ndarray
    f_baseline: float

    @property
    def betas(self) -> np.ndarray:
        return (self.params.alpha + self.x) + 1j * self.y

    @property
    def weights(self) -> np.ndarray:
        w = self.grid.actual_step ** 2
        return np.full(self.x.size, w)


@dataclass(frozen=True, eq=False)
class PhaseRegion:
    """Accepted outcomes: points with quadrature weights, plus the threshold."""

    betas: np.ndarray
    weights: np.ndarray
    delta_f: float

    def __post_init__(self):
        b = np.array(self.betas, dtype=np.complex128, copy=True).reshape(-1)
        w = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        if b.size != w.size:
            raise ValueError("betas and weights must have equal length")
        if b.size and not np.all(w > 0.0):
            raise ValueError("quadrature weights must be positive")
        b.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "betas", b)
        object.__setattr__(self, "weights", w)

    @property
    def n_points(self) -> int:
        return self.betas.size


def coherent_overlap(beta: complex, alpha: complex) -> complex:
    """<beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha)."""
    log_mag, phase = coherent_overlap_log(beta, alpha)
    return math.exp(log_mag) * complex(math.cos(phase), math.sin(phase))


def coherent_overlap_log(beta: complex, alpha: complex) -> tuple[float, float]:
    """(log-magnitude, phase) of <beta|alpha>; safe where the value underflows.

    log|.| = -|alpha - beta|^2 / 2 <= 0 always; the direct overlap underflows
    for |alpha - beta| beyond ~37, this form never does.
    """
    a = complex(alpha)
    b = complex(beta)
    cross = b.conjugate() * a
    log_mag = -0.5 * (abs(a) ** 2 + abs(b) ** 2) + cross.real
    return log_mag, cross.imag


def _ladder_log_amps(params: KerrParams) -> np.ndarray:
    """ln c_n of the truncated, renormalized geometric ladder."""
    base = tmsv_state(params.lam, params.n_max)
    with np.errstate(divide="ignore"):
        return np.log(base.coeffs.real)


def _binom_matrix(params: KerrParams) -> np.ndarray:
    return _kernels.binomial_halved_matrix(params.n_max)


def q_function(beta, params: KerrParams):
    """Outcome density Q(beta); accepts a scalar or an array of outcomes.

    Ladder weights are the renormalized truncated ones, so the full-plane
    integral of Q is exactly 1 up to quadrature (not up to tail mass).
    """
    b = np.asarray(beta, dtype=np.complex128)
    log_c = _ladder_log_amps(params)
    n = np.arange(params.n_max + 1, dtype=np.float64)
    probe = params.alpha * np.exp(1j * n * params.phi)
    flat = b.reshape(-1)
    # exponent -|probe_n - beta|^2, assembled in parts to stay vectorized
    ex = (
        2.0 * (log_c[None, :] + np.real(np.conj(flat[:, None]) * probe[None, :]))
        - (params.alpha**2 + np.abs(flat) ** 2)[:, None]
    )
    vals = np.exp(ex).sum(axis=1) / math.pi
    if b.shape == ():
        return float(vals[0])
    return vals.reshape(b.shape)


def conditional_state(beta: complex, params: KerrParams) -> SchmidtState:
    """Ladder state conditioned on outcome beta, feedforward applied.

    Built in log space with the maximal exponent subtracted, then normalized,
    so arbitrarily unlikely outcomes still produce a valid state.  The
    feedforward subtracts the phase ramp n * phi * alpha * Re(beta): the
    linear-in-n part of the measured phase, with Re(beta) standing in for
    |alpha beta| cos(arg beta).
    """
    b = complex(beta)
    log_c = _ladder_log_amps(params)
    n = np.arange(params.n_max + 1, dtype=np.float64)
    cross = params.alpha * np.conj(b) * np.exp(1j * n * params.phi)
    log_amp = log_c + cross.real
    log_amp -= log_amp.max()
    mag = np.exp(log_amp)
    mag /= math.sqrt(float(np.sum(mag * mag)))
    phase = cross.imag - n * params.phi * params.alpha * b.real
    return SchmidtState(mag * np.exp(1j * phase), lambda_meta=params.lam)


def fidelity_to_phi_n(state: SchmidtState, cut: int) -> float:
    """Overlap with the uniform ladder on levels 0..cut:
    |sum_{n<=cut} d_n|^2 / (cut + 1)."""
    cut = int(cut)
    if not 0 <= cut <= state.n_max:
        raise ValueError(f"cut must lie in [0, {state.n_max}], got {cut!r}")
    s = complex(np.sum(state.coeffs[: cut + 1]))
    return (s.real * s.real + s.imag * s.imag) / (cut + 1)


def baseline_fidelity(params: KerrParams) -> float:
    """F of the unconditioned input ladder; acceptance thresholds are
    measured as improvements over this."""
    return fidelity_to_phi_n(tmsv_state(params.lam, params.n_max), params.fock_cut)


@dataclass(frozen=True, eq=False)
class LinearizationReport:
    """Exact vs linearized outcome-dependent exponents for one beta.

    q_exact[n] + i phi_exact[n] is the ladder exponent |alpha beta|
    (cos + i sin)(n phi - arg beta); the linear model expands both to first
    order in n phi.  validity is |alpha| n_eff phi with n_eff = -1/(2 ln lam)
    (the e-folding scale of the input ladder); validity_per_n is |alpha| n
    phi level by level.  error_bound is the Taylor remainder
    |alpha beta| (n phi)^2 / 2, valid for both components.
    lambda_tilde = lam exp(phi |alpha beta| sin(arg beta)) is the effective
    ladder ratio of the linear model.
    """

    n: np.ndarray
    q_exact: np.ndarray
    phi_exact: np.ndarray
    q_linear: np.ndarray
    phi_linear: np.ndarray
    error_bound: np.ndarray
    validity: float
    validity_per_n: np.ndarray
    max_q_error: float
    max_phi_error: float
    n_eff: float
    lambda_tilde: float


def linearization_diagnostics(beta: complex, params: KerrParams) -> LinearizationReport:
    """Compare the exact conditional exponents with their linear-in-n model.

    The report covers n = 0..ceil(5 n_eff), the ladder range that carries
    essentially all input weight; max errors are taken over that range.
    """
    if params.lam == 0.0:
        raise ValueError("linearization diagnostics need lam > 0 (occupied ladder)")
    out = Outcome(complex(beta))
    phi0 = out.phi0
    ab = params.alpha * out.magnitude
    n_eff = -1.0 / (2.0 * math.log(params.lam))
    n_hi = max(1, math.ceil(5.0 * n_eff))
    n = np.arange(n_hi + 1, dtype=np.float64)
    angle = n * params.phi - phi0
    q_exact = ab * np.cos(angle)
    phi_exact = ab * np.sin(angle)
    q_linear = ab * (math.cos(phi0) + n * params.phi * math.sin(phi0))
    phi_linear = ab * (-math.sin(phi0) + n * params.phi * math.cos(phi0))
    bound = ab * (n * params.phi) ** 2 / 2.0
    return LinearizationReport(
        n=n.astype(np.int64),
        q_exact=q_exact,
        phi_exact=phi_exact,
        q_linear=q_linear,
        phi_linear=phi_linear,
        error_bound=bound,
        validity=params.alpha * n_eff * params.phi,
        validity_per_n=params.alpha * n * params.phi,
        max_q_error=float(np.max(np.abs(q_exact - q_linear))),
        max_phi_error=float(np.max(np.abs(phi_exact - phi_linear))),
        n_eff=n_eff,
        lambda_tilde=params.lam * math.exp(params.phi * ab * math.sin(phi0)),
    )


def scan_grid(params: KerrParams, grid: GridSpec) -> GridScan:
    """Evaluate Q, F, and teleportation fidelity at every grid outcome.

    The traversal order (y outer, x inner, both ascending) is part of the
    contract: CSV exports and quadrature sums follow it, which is what makes
    byte-identical reruns possible.
    """
    x, y = grid.mesh()
    log_c = _ladder_log_amps(params)
    binom = _binom_matrix(params)
    q, f_cut, f_tel = _kernels.kerr_scan(
        params.alpha + x, y, log_c, params.alpha, params.phi, params.fock_cut, binom
    )
    return GridScan(
        params=params,
        grid=grid,
        x=x,
        y=y,
        q=q,
        f_cut=f_cut,
        f_teleport=f_tel,
        f_baseline=baseline_fidelity(params),
    )


def scan_to_csv(scan: GridScan) -> str:
    """Grid scan as CSV with columns x, y, Q, F_phiN, F_teleport."""
    rows = zip(scan.x, scan.y, scan.q, scan.f_cut, scan.f_teleport)
    return csv_text(("x", "y", "Q", "F_phiN", "F_teleport"), rows)


def build_region(params: KerrParams, grid: GridSpec, delta_f: float) -> PhaseRegion:
    """Acceptance region Omega = {beta : F(beta) >= baseline + delta_f}.

    Inclusive threshold.  An unreachable threshold raises EmptyRegionError
    carrying the maximum fidelity found on the grid.
    """
    delta_f = float(delta_f)
    if delta_f < 0.0:
        raise ValueError(f"delta_f must be >= 0, got {delta_f!r}")
    scan = scan_grid(params, grid)
    mask = scan.f_cut >= scan.f_baseline + delta_f
    if not bool(np.any(mask)):
        raise EmptyRegionError(
            f"no outcome reaches F >= {scan.f_baseline + delta_f:.6f} "
            f"(grid maximum {float(scan.f_cut.max()):.6f})",
            max_fidelity=float(scan.f_cut.max()),
        )
    return PhaseRegion(scan.betas[mask], scan.weights[mask], delta_f)


def full_grid_region(params: KerrParams, grid: GridSpec) -> PhaseRegion:
    """The whole outcome window as a region (no fidelity threshold)."""
    x, y = grid.mesh()
    betas = (params.alpha + x) + 1j * y
    weights = np.full(x.size, grid.actual_step ** 2)
    return PhaseRegion(betas, weights, float("-inf"))


def _region_merits(region: PhaseRegion, params: KerrParams):
    if region.n_points == 0:
        raise ValueError("region is empty")
    log_c = _ladder_log_amps(params)
    binom = _binom_matrix(params)
    return _kernels.kerr_scan(
        region.betas.real,
        region.betas.imag,
        log_c,
        params.alpha,
        params.phi,
        params.fock_cut,
        binom,
    )


def success_probability(region: PhaseRegion, params: KerrParams) -> float:
    """P_Omega = integral over the region of Q(beta), midpoint rule."""
    q, _, _ = _region_merits(region, params)
    return float(np.sum(q * region.weights))


def average_fidelity(region: PhaseRegion, params: KerrParams) -> float:
    """Q-weighted mean of F(beta) over the region."""
    q, f_cut, _ = _region_merits(region, params)
    w = q * region.weights
    return float(np.sum(w * f_cut) / np.sum(w))


def average_teleport_fidelity(region: PhaseRegion, params: KerrParams) -> float:
    """Q-weighted mean of the teleportation fidelity over the region."""
    q, _, f_tel = _region_merits(region, params)
    w = q * region.weights
    return float(np.sum(w * f_tel) / np.sum(w))


def region_summary(region: PhaseRegion, params: KerrParams) -> dict:
    """All region figures of merit from a single kernel pass, JSON-ready."""
    q, f_cut, f_tel = _region_merits(region, params)
    w = q * region.weights
    total = float(np.sum(w))
    return {
        "delta_F": region.delta_f,
        "P_omega": total,
        "avg_F": float(np.sum(w * f_cut) / total),
        "avg_F_teleport": float(np.sum(w * f_tel) / total),
        "n_points": region.n_points,
    }
