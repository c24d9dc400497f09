"""Photon-number ladder states and diagonal conditional filters.

A pure two-mode state with perfectly correlated photon numbers is fixed by
one complex amplitude per ladder level,

    |psi> = sum_n d_n |n, n>,        sum_n |d_n|^2 = 1.

The two-mode squeezed vacuum (TMSV) is the member with a geometric ladder,
d_n = sqrt(1 - lambda^2) * lambda^n, 0 <= lambda < 1.  Both concentration
schemes in this package act diagonally on the ladder, so this family is
closed under everything we do and a single coefficient vector is a complete
state description.

A local conditional operation is a diagonal filter with per-level amplitudes
A_n, |A_n| <= 1.  Applying it keeps the ladder form,

    d_n  ->  A_n d_n / sqrt(p),      p = sum_n |A_n d_n|^2,

and succeeds with probability p.  Entanglement of the result is the von
Neumann entropy of either reduced state, S = -sum_n |d_n|^2 ln |d_n|^2,
reported in nats.

Truncation policy: the ladder is cut at n_max chosen so the discarded TMSV
tail lambda^(2(n_max+1)) stays below a tolerance (1e-20 by default), and the
kept coefficients are renormalized, which keeps every downstream formula
exactly normalized instead of almost normalized.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._util import csv_text, wrap_half_angle
from .errors import TruncationError, ZeroProbabilityError

DEFAULT_TAIL_MASS = 1e-20
NORM_TOL = 1e-12

__all__ = [
    "DEFAULT_TAIL_MASS",
    "NORM_TOL",
    "SchmidtState",
    "DiagonalFilter",
    "tmsv_state",
    "default_n_max",
    "apply_filter",
    "von_neumann_entropy",
    "tmsv_entropy_analytic",
    "canonicalize_phase",
    "fit_phase_ramp",
]


def _readonly_complex(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SchmidtState:
    """Normalized ladder amplitudes d_n for n = 0..n_max.

    `lambda_meta` and `tail_mass` are provenance metadata (the squeezing
    parameter the ladder was built from and the probability discarded by the
    cutoff); they do not enter any computation.
    """

    coeffs: np.ndarray
    lambda_meta: float | None = None
    tail_mass: float | None = None

    def __post_init__(self):
        arr = _readonly_complex(self.coeffs)
        if arr.size == 0:
            raise ValueError("state needs at least one ladder coefficient")
        norm2 = float(np.sum(np.abs(arr) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(
                f"coefficients not normalized: sum |d_n|^2 = {norm2!r}"
            )
        object.__setattr__(self, "coeffs", arr)

    @property
    def n_max(self) -> int:
        return self.coeffs.size - 1

    @property
    def probabilities(self) -> np.ndarray:
        """Ladder weights |d_n|^2."""
        return np.abs(self.coeffs) ** 2

    def to_json(self) -> str:
        payload = {
            "lambda_meta": self.lambda_meta,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SchmidtState":
        payload = json.loads(text)
        pairs = payload["coeffs"]
        coeffs = np.array([complex(re, im) for re, im in pairs])
        return cls(coeffs, lambda_meta=payload.get("lambda_meta"))

    def to_csv(self) -> str:
        """Rows n, re, im, abs2 (floats at 17 significant digits)."""
        rows = [
            (float(n), c.real, c.imag, abs(c) ** 2)
            for n, c in enumerate(self.coeffs)
        ]
        return csv_text(("n", "re", "im", "abs2"), rows)


@dataclass(frozen=True, eq=False)
class DiagonalFilter:
    """Per-level amplitudes A_n of a diagonal conditional map.

    Construction rescales unphysical inputs: if max |A_n| exceeds 1 the whole
    vector is divided by it, so the stored filter always satisfies
    max |A_n| <= 1 (+ float slack) and success probabilities stay in [0, 1].
    Filters already inside the unit ball are kept exactly as given.  The
    pre-rescale magnitude is kept in `input_scale`.
    """

    values: np.ndarray
    input_scale: float = field(default=1.0)

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.complex128, copy=True).reshape(-1)
        if arr.size == 0:
            raise ValueError("filter needs at least one level")
        if not np.all(np.isfinite(arr)):
            raise ValueError("filter amplitudes must be finite")
        peak = float(np.max(np.abs(arr)))
        if peak > 1.0:
            arr = arr / peak
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "input_scale", max(peak, 1.0) if peak > 0 else 1.0)

    @property
    def n_max(self) -> int:
        return self.values.size - 1


def default_n_max(lam: float, tail_mass: float = DEFAULT_TAIL_MASS) -> int:
    """Smallest cutoff N with lambda^(2(N+1)) <= tail_mass."""
    lam = float(lam)
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"squeezing parameter must satisfy 0 <= lam < 1, got {lam!r}")
    if not 0.0 < tail_mass < 1.0:
        raise ValueError(f"tail mass tolerance must lie in (0, 1), got {tail_mass!r}")
    if lam == 0.0:
        return 0
    # closed-form seed, then integer scan to absorb float rounding at the edge
    n = max(0, math.ceil(math.log(tail_mass) / (2.0 * math.log(lam))) - 1)
    while lam ** (2 * (n + 1)) > tail_mass:
        n += 1
    while n > 0 and lam ** (2 * n) <= tail_mass:
        n -= 1
    return n


def tmsv_state(
    lam: float,
    n_max: int | None = None,
    tail_tol: float | None = None,
) -> SchmidtState:
    """Truncated, renormalized two-mode squeezed vacuum ladder.

    With `n_max=None` the cutoff is derived from the tail tolerance
    (`tail_tol` or the 1e-20 default).  An explicit `n_max` is honored as
    given; pass `tail_tol` as well to have the discarded mass checked against
    it (TruncationError with a suggested cutoff if it is exceeded).  The
    discarded tail lambda^(2(n_max+1)) is recorded on the returned state.
    """
    lam = float(lam)
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"squeezing parameter must satisfy 0 <= lam < 1, got {lam!r}")
    if n_max is None:
        n_max = default_n_max(lam, DEFAULT_TAIL_MASS if tail_tol is None else tail_tol)
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    tail = lam ** (2 * (n_max + 1))
    if tail_tol is not None and tail > tail_tol:
        raise TruncationError(
            f"cutoff n_max={n_max} discards tail mass {tail:.3e} > {tail_tol:.3e}",
            suggested_n_max=default_n_max(lam, tail_tol),
        )
    amps = lam ** np.arange(n_max + 1, dtype=np.float64)
    amps /= math.sqrt(float(np.sum(amps * amps)))
    return SchmidtState(amps, lambda_meta=lam, tail_mass=tail)


def apply_filter(state: SchmidtState, filt: DiagonalFilter) -> tuple[SchmidtState, float]:
    """Condition the ladder on filter success; return (new state, probability).

    The filter must cover exactly the state's ladder.  Success probability
    below 1e-300 is treated as an impossible branch (ZeroProbabilityError)
    rather than silently producing a non-normalizable vector.
    """
    if filt.values.size != state.coeffs.size:
        raise ValueError(
            f"filter covers {filt.values.size} levels, state has {state.coeffs.size}"
        )
    scaled = filt.values * state.coeffs
    prob = float(np.sum(np.abs(scaled) ** 2))
    if prob < 1e-300:
        raise ZeroProbabilityError(
            f"filter annihilates the state (success probability {prob!r})"
        )
    out = SchmidtState(scaled / math.sqrt(prob), lambda_meta=state.lambda_meta)
    return out, prob


def von_neumann_entropy(state: SchmidtState) -> float:
    """Entropy -sum p_n ln p_n of the ladder weights, in nats (0 ln 0 := 0).

    Clamped at 0: rounding in the weights of a pure level can otherwise
    yield -1e-16-scale values.
    """
    p = state.probabilities
    p = p[p > 0.0]
    return max(0.0, float(-np.sum(p * np.log(p))))


def tmsv_entropy_analytic(lam: float) -> float:
    """Closed-form TMSV entanglement entropy in nats.

    S(lam) = -ln(1 - lam^2) - lam^2/(1 - lam^2) * ln(lam^2); S(0) = 0.
    """
    lam = float(lam)
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"squeezing parameter must satisfy 0 <= lam < 1, got {lam!r}")
    if lam == 0.0:
        return 0.0
    l2 = lam * lam
    return -math.log1p(-l2) - l2 / (1.0 - l2) * math.log(l2)


def fit_phase_ramp(coeffs: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    """Weighted linear fit (intercept, slope) to the coefficient phases.

    Works on squared coefficients so that sign flips (phase jumps of pi) do
    not bias the fit; the returned intercept and slope are therefore mod-pi
    representatives, reduced to (-pi/2, pi/2].  A second, ordinary weighted
    least-squares pass on the residual phases refines the estimate when the
    phase profile is smooth rather than exactly linear.
    """
    z = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if z.size != w.size:
        raise ValueError("coeffs and weights must have equal length")
    n = np.arange(z.size, dtype=np.float64)
    sq = z * z  # doubled phases; |sq| = w for w = |z|^2

    pair = np.sum(sq[1:] * np.conj(sq[:-1]))
    slope = 0.5 * float(np.angle(pair)) if abs(pair) > 0.0 else 0.0
    anchor = np.sum(sq * np.exp(-2j * slope * n))
    intercept = 0.5 * float(np.angle(anchor)) if abs(anchor) > 0.0 else 0.0

    # refinement: residual phases are near 0 mod pi, so arg(e^2)/2 is safe
    resid = z * np.exp(-1j * (intercept + slope * n))
    psi = 0.5 * np.angle(resid * resid)
    wt = np.where(w > 0.0, w, 0.0)
    total = float(np.sum(wt))
    if total > 0.0:
        nbar = float(np.sum(wt * n)) / total
        pbar = float(np.sum(wt * psi)) / total
        var = float(np.sum(wt * (n - nbar) ** 2))
        d_slope = float(np.sum(wt * (n - nbar) * (psi - pbar))) / var if var > 0.0 else 0.0
        intercept += pbar - d_slope * nbar
        slope += d_slope
    return wrap_half_angle(intercept), wrap_half_angle(slope)


def canonicalize_phase(state: SchmidtState) -> SchmidtState:
    """Remove a global phase and the best-fit linear phase ramp.

    States whose phases are exactly linear in n (up to sign flips) come out
    real; already-real states are returned unchanged.  Because signed-real
    ladders determine their ramp only modulo pi, the result is canonical up
    to one global +-1, which is itself a global phase.  Magnitudes, and
    hence entropy and all probabilities, are untouched.
    """
    d = state.coeffs
    if np.all(d.imag == 0.0):
        return state
    intercept, slope = fit_phase_ramp(d, np.abs(d) ** 2)
    n = np.arange(d.size, dtype=np.float64)
    out = d * np.exp(-1j * (intercept + slope * n))
    # exactly-linear inputs land on the real axis up to float noise; snap
    # only that noise, never a genuine residual phase
    if float(np.max(np.abs(out.imag))) <= 1e-12 * float(np.max(np.abs(out.real))):
        out = out.real.astype(np.complex128)
        out /= math.sqrt(float(np.sum(out.real**2)))
    return SchmidtState(out, lambda_meta=state.lambda_meta, tail_mass=state.tail_mass)
