"""Parameter sweeps and the filter-phase optimizer.

Everything here is a thin deterministic driver over the closed forms and
grid scans of the scheme modules: fixed evaluation grids, fixed traversal
order, no randomness.  Sweep gaps (parameter points where a conditional
state does not exist because the filter annihilates the input) are reported
as NaN rather than dropped, so exported curves keep one row per grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._util import csv_text
from .cavity import CavityParams, cavity_schmidt, cavity_success_prob_analytic
from .errors import EmptyRegionError, ZeroProbabilityError
from .fock import von_neumann_entropy
from .kerr import GridSpec, KerrParams, scan_grid
from .teleport import cavity_teleport_fidelity_analytic

__all__ = [
    "SweepResult",
    "OptimumReport",
    "sweep_cavity_phi0",
    "optimize_phi0",
    "sweep_kerr_threshold",
    "sweep_to_csv",
]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class SweepResult:
    """One swept axis plus named result series of the same length.

    truncated_at is set when the sweep stopped early (threshold sweeps stop
    at the first empty acceptance region); the series then cover only the
    axis values that produced data.
    """

    axis_name: str
    axis_values: np.ndarray
    series: dict
    truncated_at: Optional[float] = None

    def __post_init__(self):
        n = np.asarray(self.axis_values).size
        for name, vals in self.series.items():
            if np.asarray(vals).size != n:
                raise ValueError(f"series {name!r} length does not match the axis")

    def to_json_dict(self) -> dict:
        payload = {
            "axis_name": self.axis_name,
            "axis_values": [float(v) for v in self.axis_values],
            "series": {
                name: [
                    int(v) if np.issubdtype(np.asarray(vals).dtype, np.integer) else float(v)
                    for v in vals
                ]
                for name, vals in self.series.items()
            },
            "truncated_at": self.truncated_at,
        }
        return payload


@dataclass(frozen=True)
class OptimumReport:
    """Result of the filter-phase optimization at fixed lam, phi."""

    phi0_star: float
    fidelity_star: float
    probability_at_star: float
    evaluations: int

    def to_json_dict(self) -> dict:
        return {
            "phi0_star": self.phi0_star,
            "fidelity_star": self.fidelity_star,
            "probability_at_star": self.probability_at_star,
            "evaluations": self.evaluations,
        }


def _phi0_axis(lo: float, hi: float, steps: int) -> np.ndarray:
    """steps points lo + k (hi - lo)/steps, k = 1..steps: half-open (lo, hi].

    The open left end avoids the duplicate angle when the range spans a full
    period (-pi and pi are the same filter).
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if not hi > lo:
        raise ValueError("phi0 range must satisfy hi > lo")
    k = np.arange(1, steps + 1, dtype=np.float64)
    return lo + (hi - lo) * k / steps


def sweep_to_csv(result: SweepResult) -> str:
    """Sweep as CSV: axis first, then one column per series in insertion
    order.  NaN gaps print as the literal token nan."""
    header = (result.axis_name, *result.series.keys())
    rows = zip(result.axis_values, *result.series.values())
    return csv_text(header, rows)


def sweep_cavity_phi0(
    lam: float,
    phi: float,
    phi0_min: float = -math.pi,
    phi0_max: float = math.pi,
    steps: int = 400,
) -> SweepResult:
    """Success probability, entropy, and teleport fidelity vs filter phase.

    P comes from the closed form and is exact even where it vanishes; S and
    F require the conditional state and are NaN at zero-probability points.
    """
    axis = _phi0_axis(phi0_min, phi0_max, steps)
    prob = np.empty(axis.size)
    entropy = np.empty(axis.size)
    fidelity = np.empty(axis.size)
    for i, phi0 in enumerate(axis):
        params = CavityParams(lam, phi, float(phi0))
        prob[i] = cavity_success_prob_analytic(params)
        try:
            state, _ = cavity_schmidt(params)
            entropy[i] = von_neumann_entropy(state)
        except ZeroProbabilityError:
            entropy[i] = math.nan
        try:
            fidelity[i] = cavity_teleport_fidelity_analytic(lam, phi, float(phi0))
        except ZeroProbabilityError:
            fidelity[i] = math.nan
    return SweepResult(
        axis_name="phi0",
        axis_values=axis,
        series={"P": prob, "S": entropy, "F": fidelity},
    )


def optimize_phi0(
    lam: float,
    phi: float,
    tol: float = 1e-6,
    steps: int = 400,
) -> OptimumReport:
    """Filter phase maximizing the teleportation fidelity at fixed lam, phi.

    Coarse scan on the standard (-pi, pi] grid, then golden-section
    refinement of the best cell down to an interval of width tol.  Both
    stages use only the closed-form fidelity; zero-probability points score
    -inf and are skipped over.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    evals = 0

    def score(phi0: float) -> float:
        nonlocal evals
        evals += 1
        try:
            return cavity_teleport_fidelity_analytic(lam, phi, phi0)
        except ZeroProbabilityError:
            return -math.inf

    axis = _phi0_axis(-math.pi, math.pi, steps)
    values = np.array([score(float(p)) for p in axis])
    best = int(np.argmax(values))
    if not math.isfinite(values[best]):
        raise ZeroProbabilityError(
            "filter annihilates the input at every scanned phase"
        )
    half_cell = (2.0 * math.pi) / steps / 2.0
    a = float(axis[best]) - 2.0 * half_cell
    b = float(axis[best]) + 2.0 * half_cell

    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = score(c), score(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = score(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = score(d)
    phi0_star = (a + b) / 2.0
    f_star = score(phi0_star)
    params = CavityParams(lam, phi, phi0_star)
    return OptimumReport(
        phi0_star=params.phi0,
        fidelity_star=f_star,
        probability_at_star=cavity_success_prob_analytic(params),
        evaluations=evals,
    )


def sweep_kerr_threshold(
    params: KerrParams,
    grid: GridSpec,
    delta_f_values,
) -> SweepResult:
    """Region statistics as the acceptance threshold rises.

    One grid scan serves every threshold; each delta_F then only re-masks
    the cached per-point merits.  The sweep stops at the first threshold no
    grid outcome reaches and records it as truncated_at.
    """
    deltas = np.array(delta_f_values, dtype=np.float64).reshape(-1)
    if deltas.size == 0:
        raise ValueError("delta_f_values must be non-empty")
    if np.any(deltas < 0.0):
        raise ValueError("delta_f values must be >= 0")
    if np.any(np.diff(deltas) <= 0.0):
        raise ValueError("delta_f values must be strictly increasing")

    scan = scan_grid(params, grid)
    w_all = scan.weights
    kept_axis = []
    p_omega = []
    avg_f = []
    avg_f_tel = []
    n_points = []
    truncated_at = None
    for delta in deltas:
        mask = scan.f_cut >= scan.f_baseline + delta
        if not bool(np.any(mask)):
            truncated_at = float(delta)
            break
        qw = scan.q[mask] * w_all[mask]
        total = float(np.sum(qw))
        kept_axis.append(float(delta))
        p_omega.append(total)
        avg_f.append(float(np.sum(qw * scan.f_cut[mask]) / total))
        avg_f_tel.append(float(np.sum(qw * scan.f_teleport[mask]) / total))
        n_points.append(int(np.count_nonzero(mask)))
    if not kept_axis:
        raise EmptyRegionError(
            f"no outcome reaches even the lowest threshold "
            f"(grid maximum {float(scan.f_cut.max()):.6f})",
            max_fidelity=float(scan.f_cut.max()),
        )
    return SweepResult(
        axis_name="delta_F",
        axis_values=np.array(kept_axis),
        series={
            "P_omega": np.array(p_omega),
            "avg_F": np.array(avg_f),
            "avg_F_teleport": np.array(avg_f_tel),
            "n_points": np.array(n_points, dtype=np.int64),
        },
        truncated_at=truncated_at,
    )
