"""Timing comparison: compiled kernels vs their pure-numpy fallbacks.

Runs the two hot paths (teleportation double sum, outcome-grid scan) on both
backends, checks they agree, and prints median wall times with speedups.
The numbers justify keeping the compiled path as the default; the fallback
exists for environments without a working JIT (ENTCONC_DISABLE_NUMBA=1).

    python3 benchmarks/bench_kernels.py [--n-max 2048] [--grid 101]
                                        [--kerr-n-max 128] [--repeats 5]
"""

import argparse
import math
import statistics
import time

import numpy as np

from entconc import _kernels, tmsv_state


def median_time(fn, repeats: int) -> float:
    fn()  # warmup: JIT compilation, caches, allocator
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_teleport(n_max: int, repeats: int):
    n = np.arange(n_max + 1, dtype=np.float64)
    coeffs = tmsv_state(0.9, n_max=n_max).coeffs * np.exp(1j * (0.2 * n + 0.01 * n * n))
    with np.errstate(divide="ignore"):
        log_mag = np.log(np.abs(coeffs))
    phase = np.angle(coeffs)

    t_np = median_time(lambda: _kernels.teleport_sum_numpy(log_mag, phase), repeats)
    if not _kernels.NUMBA_AVAILABLE:
        return t_np, None, 0.0
    t_nb = median_time(lambda: _kernels.teleport_sum_numba(log_mag, phase), repeats)
    diff = abs(
        _kernels.teleport_sum_numpy(log_mag, phase)
        - _kernels.teleport_sum_numba(log_mag, phase)
    )
    return t_np, t_nb, diff


def bench_scan(points: int, n_max: int, repeats: int):
    alpha, phi, cut = 10.0, math.pi / 100, 10
    ax = np.linspace(-5.0, 5.0, points)
    yy, xx = np.meshgrid(ax, ax, indexing="ij")
    bx = alpha + xx.ravel()
    by = yy.ravel()
    with np.errstate(divide="ignore"):
        log_c = np.log(tmsv_state(0.5, n_max=n_max).coeffs.real)
    binom = _kernels.binomial_halved_matrix(n_max)
    args = (bx, by, log_c, alpha, phi, cut, binom)

    t_np = median_time(lambda: _kernels.kerr_scan_numpy(*args), repeats)
    if not _kernels.NUMBA_AVAILABLE:
        return t_np, None, 0.0
    t_nb = median_time(lambda: _kernels.kerr_scan_numba(*args), repeats)
    diff = max(
        float(np.max(np.abs(a - b)))
        for a, b in zip(_kernels.kerr_scan_numpy(*args), _kernels.kerr_scan_numba(*args))
    )
    return t_np, t_nb, diff


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=2048,
                        help="ladder cutoff for the teleportation sum")
    parser.add_argument("--grid", type=int, default=101,
                        help="outcome-grid points per axis")
    parser.add_argument("--kerr-n-max", type=int, default=128,
                        help="ladder cutoff for the grid scan")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed repetitions (median reported)")
    args = parser.parse_args()

    if not _kernels.NUMBA_AVAILABLE:
        print("note: compiled backend unavailable "
              "(numba missing or ENTCONC_DISABLE_NUMBA set); timing numpy only")

    rows = []
    t_np, t_nb, diff = bench_teleport(args.n_max, args.repeats)
    rows.append((f"teleport_sum (n_max={args.n_max})", t_np, t_nb, diff))
    t_np, t_nb, diff = bench_scan(args.grid, args.kerr_n_max, args.repeats)
    rows.append(
        (f"kerr_scan ({args.grid}x{args.grid}, n_max={args.kerr_n_max})",
         t_np, t_nb, diff)
    )

    name_w = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{name_w}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}  {'max diff':>9}")
    for name, t_np, t_nb, diff in rows:
        if t_nb is None:
            print(f"{name:<{name_w}}  {t_np:>9.4f}s  {'-':>10}  {'-':>8}  {'-':>9}")
        else:
            print(f"{name:<{name_w}}  {t_np:>9.4f}s  {t_nb:>9.4f}s  "
                  f"{t_np / t_nb:>7.1f}x  {diff:>9.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
