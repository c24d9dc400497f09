"""Hot numeric kernels: numba-accelerated with a pure-numpy fallback.

Backend selection happens once at import: numba is used when it imports
cleanly and the environment flag ENTCONC_DISABLE_NUMBA is unset/false,
otherwise the numpy path runs.  Both implementations are importable
regardless of the active backend so they can be benchmarked and
cross-checked against each other (see benchmarks/bench_kernels.py).

Determinism contract: grid kernels are map-only (each point writes its own
slot; no cross-point accumulation inside parallel loops), and every
reduction downstream runs in fixed row-major order on single-threaded numpy.
Outputs are therefore independent of the worker thread count.
"""

from __future__ import annotations

import math
import os

import numpy as np

# quiet the TBB version probe in minimal environments; callers can override
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

_LN2 = math.log(2.0)
_DISABLE_FLAG = "ENTCONC_DISABLE_NUMBA"


def _disabled_by_flag() -> bool:
    return os.environ.get(_DISABLE_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_AVAILABLE = False
if not _disabled_by_flag():
    try:
        from numba import njit, prange

        NUMBA_AVAILABLE = True
    except ImportError:  # pragma: no cover - exercised only without numba
        pass

if not NUMBA_AVAILABLE:
    def njit(*args, **kwargs):  # noqa: D103 - identity decorator stand-in
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap

    prange = range

BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"


def set_threads(n: int) -> int:
    """Cap worker parallelism; returns the effective thread count."""
    n = max(1, int(n))
    if NUMBA_AVAILABLE:
        import numba

        n = min(n, numba.config.NUMBA_NUM_THREADS)
        numba.set_num_threads(n)
        return n
    return 1


def lgamma_table(k_max: int) -> np.ndarray:
    """lgamma(k + 1) for k = 0..k_max."""
    return np.array([math.lgamma(k + 1.0) for k in range(k_max + 1)])


def binomial_halved_matrix(n_max: int) -> np.ndarray:
    """B[m, k] = C(m+k, k) / 2^(m+k), evaluated in log space.

    Entries never exceed 1 (they are binomial probabilities), so the matrix
    is safe to precompute at any cutoff; only the direct binomial would
    overflow.
    """
    lgf = lgamma_table(2 * n_max)
    idx = np.arange(n_max + 1)
    s = idx[:, None] + idx[None, :]
    return np.exp(lgf[s] - lgf[idx][:, None] - lgf[idx][None, :] - s * _LN2)


# ---------------------------------------------------------------------------
# teleportation-fidelity double sum over a single ladder
# ---------------------------------------------------------------------------

def teleport_sum_numpy(log_mag: np.ndarray, phase: np.ndarray) -> complex:
    """sum_{m,n} C(m+n,n)/2^(m+n) d_m conj(d_n), diagonals ascending.

    Exponents are combined in log space (log C - (m+n) ln 2 + ln|d_m| +
    ln|d_n|) so no intermediate overflows at any cutoff; zero amplitudes
    enter as -inf and exponentiate to exactly 0.
    """
    m_size = log_mag.size
    lgf = lgamma_table(2 * m_size)
    total = 0.0 + 0.0j
    for s in range(0, 2 * m_size - 1):
        lo = max(0, s - m_size + 1)
        hi = min(s, m_size - 1)
        n = np.arange(lo, hi + 1)
        m = s - n
        lw = lgf[s] - lgf[n] - lgf[m] - s * _LN2 + log_mag[m] + log_mag[n]
        total += complex(np.sum(np.exp(lw) * np.exp(1j * (phase[m] - phase[n]))))
    return total


@njit(cache=True)
def _teleport_sum_nb(log_mag, phase, lgf):  # pragma: no cover - jit body
    m_size = log_mag.size
    acc_re = 0.0
    acc_im = 0.0
    for s in range(0, 2 * m_size - 1):
        lo = 0 if s < m_size else s - m_size + 1
        hi = s if s < m_size else m_size - 1
        for n in range(lo, hi + 1):
            m = s - n
            lw = lgf[s] - lgf[n] - lgf[m] - s * 0.6931471805599453 + log_mag[m] + log_mag[n]
            mag = math.exp(lw)
            dph = phase[m] - phase[n]
            acc_re += mag * math.cos(dph)
            acc_im += mag * math.sin(dph)
    return acc_re, acc_im


def teleport_sum_numba(log_mag: np.ndarray, phase: np.ndarray) -> complex:
    lgf = lgamma_table(2 * log_mag.size)
    re, im = _teleport_sum_nb(log_mag, phase, lgf)
    return complex(re, im)


def teleport_sum(coeffs: np.ndarray) -> complex:
    """Dispatch the double sum on the active backend."""
    d = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    with np.errstate(divide="ignore"):
        log_mag = np.log(np.abs(d))
    phase = np.angle(d)
    if NUMBA_AVAILABLE:
        return teleport_sum_numba(log_mag, phase)
    return teleport_sum_numpy(log_mag, phase)


# ---------------------------------------------------------------------------
# conditioned-ladder grid scan for the probe-measurement scheme
# ---------------------------------------------------------------------------
#
# Per point beta = bx + i by (probe amplitude alpha real):
#   exponent  re_n  = alpha (bx cos n phi + by sin n phi) = Re(alpha conj(beta) e^{i n phi})
#   weight    Q     = 1/pi sum_n c_n^2 exp(2 re_n - alpha^2 - |beta|^2)
#   amplitude u_n  ~ exp(ln c_n + re_n - max) / norm   (log-space, max subtracted)
#   phase     psi_n = alpha (bx sin n phi - by cos n phi) - n phi alpha bx
#                     (second term: measured-phase feedforward, proportional
#                      to the real part of beta)
#   F_cut = |sum_{n<=cut} u_n e^{i psi_n}|^2 / (cut + 1)
#   F_tel = 1/2 sum_{m,n} B[m,n] Re(d_m conj(d_n))

def kerr_scan_numpy(
    bx: np.ndarray,
    by: np.ndarray,
    log_c: np.ndarray,
    alpha: float,
    phi: float,
    cut: int,
    binom: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = np.arange(log_c.size, dtype=np.float64)
    cos_n = np.cos(n * phi)
    sin_n = np.sin(n * phi)
    re = alpha * (np.outer(bx, cos_n) + np.outer(by, sin_n))
    log_amp = log_c[None, :] + re
    q = np.exp(2.0 * log_amp - (alpha * alpha + bx * bx + by * by)[:, None]).sum(axis=1) / math.pi
    log_amp -= log_amp.max(axis=1, keepdims=True)
    u = np.exp(log_amp)
    u /= np.sqrt(np.sum(u * u, axis=1, keepdims=True))
    psi = alpha * (np.outer(bx, sin_n) - np.outer(by, cos_n)) - np.outer(alpha * phi * bx, n)
    d = u * np.exp(1j * psi)
    f_cut = np.abs(d[:, : cut + 1].sum(axis=1)) ** 2 / (cut + 1)
    # optimize=False keeps einsum on its deterministic single-threaded path
    f_tel = 0.5 * np.einsum("pm,mn,pn->p", d, binom, d.conj(), optimize=False).real
    return q, f_cut, f_tel


@njit(cache=True, parallel=True)
def _kerr_scan_nb(bx, by, log_c, alpha, phi, cut, binom, out_q, out_fc, out_ft):  # pragma: no cover
    m_size = log_c.size
    cos_n = np.empty(m_size)
    sin_n = np.empty(m_size)
    for k in range(m_size):
        cos_n[k] = math.cos(k * phi)
        sin_n[k] = math.sin(k * phi)
    inv_pi = 1.0 / math.pi
    a2 = alpha * alpha
    for p in prange(bx.size):
        bxp = bx[p]
        byp = by[p]
        base = a2 + bxp * bxp + byp * byp
        peak = -1.0e308
        q_acc = 0.0
        for k in range(m_size):
            l = log_c[k] + alpha * (bxp * cos_n[k] + byp * sin_n[k])
            if l > peak:
                peak = l
            q_acc += math.exp(2.0 * l - base)
        out_q[p] = q_acc * inv_pi

        dr = np.empty(m_size)
        di = np.empty(m_size)
        norm2 = 0.0
        for k in range(m_size):
            u = math.exp(log_c[k] + alpha * (bxp * cos_n[k] + byp * sin_n[k]) - peak)
            dr[k] = u
            norm2 += u * u
        inv_norm = 1.0 / math.sqrt(norm2)
        sum_re = 0.0
        sum_im = 0.0
        for k in range(m_size):
            psi = alpha * (bxp * sin_n[k] - byp * cos_n[k]) - k * phi * alpha * bxp
            u = dr[k] * inv_norm
            dr[k] = u * math.cos(psi)
            di[k] = u * math.sin(psi)
            if k <= cut:
                sum_re += dr[k]
                sum_im += di[k]
        out_fc[p] = (sum_re * sum_re + sum_im * sum_im) / (cut + 1)

        acc = 0.0
        for s in range(0, 2 * m_size - 1):
            lo = 0 if s < m_size else s - m_size + 1
            hi = s if s < m_size else m_size - 1
            for k in range(lo, hi + 1):
                m = s - k
                acc += binom[m, k] * (dr[m] * dr[k] + di[m] * di[k])
        out_ft[p] = 0.5 * acc


def kerr_scan_numba(
    bx: np.ndarray,
    by: np.ndarray,
    log_c: np.ndarray,
    alpha: float,
    phi: float,
    cut: int,
    binom: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    out_q = np.empty(bx.size)
    out_fc = np.empty(bx.size)
    out_ft = np.empty(bx.size)
    _kerr_scan_nb(
        np.ascontiguousarray(bx, dtype=np.float64),
        np.ascontiguousarray(by, dtype=np.float64),
        np.ascontiguousarray(log_c, dtype=np.float64),
        float(alpha),
        float(phi),
        int(cut),
        np.ascontiguousarray(binom, dtype=np.float64),
        out_q,
        out_fc,
        out_ft,
    )
    return out_q, out_fc, out_ft


def kerr_scan(
    bx: np.ndarray,
    by: np.ndarray,
    log_c: np.ndarray,
    alpha: float,
    phi: float,
    cut: int,
    binom: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-point (Q, F_cut, F_teleport) on the active backend."""
    bx = np.asarray(bx, dtype=np.float64).reshape(-1)
    by = np.asarray(by, dtype=np.float64).reshape(-1)
    if NUMBA_AVAILABLE:
        return kerr_scan_numba(bx, by, log_c, alpha, phi, cut, binom)
    return kerr_scan_numpy(bx, by, log_c, alpha, phi, cut, binom)
