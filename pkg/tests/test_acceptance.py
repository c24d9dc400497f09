"""End-to-end acceptance checks: one test per headline claim of the package.

Each test prints a PASS line with the measured numbers; `pytest -v` shows one
verdict line per claim.  Fine-grained unit tests live in the per-module files;
everything here exercises the public API (or the installed CLI) only.
"""

import cmath
import json
import math
import subprocess
import sys

import numpy as np

from entconc import (
    CavityParams,
    GridSpec,
    KerrParams,
    apply_filter,
    baseline_fidelity,
    build_region,
    canonicalize_phase,
    cavity_filter,
    cavity_schmidt,
    cavity_success_prob_analytic,
    cavity_teleport_fidelity_analytic,
    coherent_overlap,
    conditional_state,
    evolve_atom_field,
    fidelity_to_phi_n,
    linearization_diagnostics,
    optimize_phi0,
    region_summary,
    scan_grid,
    sweep_kerr_threshold,
    teleport_fidelity,
    tmsv_entropy_analytic,
    tmsv_state,
    von_neumann_entropy,
)

KERR_DEFAULTS = KerrParams(0.5, 10.0, math.pi / 100, n_max=128, fock_cut=10)


def _dist_up_to_sign(a, b) -> float:
    return min(float(np.max(np.abs(a - b))), float(np.max(np.abs(a + b))))


def test_input_entropy_closed_form_and_sum_agree():
    s_half = tmsv_entropy_analytic(0.5)
    assert abs(s_half - 0.7498) < 5e-5
    assert abs(s_half - 0.75) < 2e-3
    worst = 0.0
    for lam in np.arange(0.1, 0.91, 0.1):
        summed = von_neumann_entropy(tmsv_state(float(lam)))
        worst = max(worst, abs(summed - tmsv_entropy_analytic(float(lam))))
    assert worst < 1e-10
    print(f"PASS input entropy: S(0.5) = {s_half:.6f}, "
          f"max |analytic - sum| = {worst:.2e}")


def test_input_teleportation_fidelity_is_half_one_plus_lambda():
    f_half = teleport_fidelity(tmsv_state(0.5)).fidelity
    assert abs(f_half - 0.75) < 1e-6
    worst = 0.0
    for lam in np.arange(0.0, 0.81, 0.1):
        fid = teleport_fidelity(tmsv_state(float(lam))).fidelity
        worst = max(worst, abs(fid - (1.0 + lam) / 2.0))
    assert worst < 1e-9
    print(f"PASS input fidelity: F(0.5) = {f_half:.9f}, "
          f"max |F - (1+lambda)/2| = {worst:.2e}")


def test_filter_phase_optimum_headline_numbers():
    report = optimize_phi0(0.5, math.pi / 10)
    assert abs(report.phi0_star - (-math.pi / 10)) <= 0.05
    assert abs(report.fidelity_star - 0.837) <= 5e-3
    assert abs(report.probability_at_star - 0.05) <= 5e-3
    print(f"PASS filter optimum: phi0* = {report.phi0_star:.5f} "
          f"(vs -pi/10 = {-math.pi / 10:.5f}), F = {report.fidelity_star:.4f}, "
          f"P = {report.probability_at_star:.4f}")


def test_conditional_ladder_routes_are_consistent():
    base = tmsv_state(0.5)
    worst_state, worst_prob, worst_fid = 0.0, 0.0, 0.0
    for phi in np.linspace(-3.0, 3.0, 20):
        for phi0 in np.linspace(-3.0, 3.0, 20):
            params = CavityParams(0.5, float(phi), float(phi0))

            evolved, p_a = evolve_atom_field(params).project_ground()
            a = canonicalize_phase(evolved)
            filtered, p_b = apply_filter(base, cavity_filter(params, base.n_max))
            b = canonicalize_phase(filtered)
            c, p_c = cavity_schmidt(params)

            worst_state = max(
                worst_state,
                _dist_up_to_sign(a.coeffs, c.coeffs),
                _dist_up_to_sign(b.coeffs, c.coeffs),
                _dist_up_to_sign(a.coeffs, b.coeffs),
            )
            p_analytic = cavity_success_prob_analytic(params)
            worst_prob = max(worst_prob, abs(p_a - p_analytic), abs(p_b - p_analytic))

            f_analytic = cavity_teleport_fidelity_analytic(
                0.5, float(phi), float(phi0)
            )
            worst_fid = max(
                worst_fid, abs(f_analytic - teleport_fidelity(c).fidelity)
            )
    assert worst_state < 1e-12
    assert worst_prob < 1e-10
    assert worst_fid < 1e-8
    print(f"PASS route consistency (20x20): ladders {worst_state:.2e}, "
          f"probabilities {worst_prob:.2e}, fidelities {worst_fid:.2e}")


def test_uniform_ladder_overlap_baseline():
    f0 = fidelity_to_phi_n(tmsv_state(0.5, n_max=128), 10)
    assert abs(f0 - 0.273) <= 1e-3
    assert baseline_fidelity(KERR_DEFAULTS) == f0
    print(f"PASS probe-scheme baseline: F0 = {f0:.6f} (target 0.273 +- 1e-3)")


def test_threshold_sweep_trends_on_default_grid():
    deltas = [0.05 * k for k in range(9)]
    sweep = sweep_kerr_threshold(KERR_DEFAULTS, GridSpec(), deltas)
    assert sweep.truncated_at is None
    assert len(sweep.axis_values) == 9
    avg_f = np.array(sweep.series["avg_F"])
    p_omega = np.array(sweep.series["P_omega"])
    f_tel = np.array(sweep.series["avg_F_teleport"])
    f0 = baseline_fidelity(KERR_DEFAULTS)
    assert np.all(np.diff(avg_f) >= 0.0)
    assert np.all(np.diff(p_omega) <= 0.0)
    assert np.all(f_tel[1:] > 0.75)
    assert np.all(avg_f > f0 + np.array(deltas) - 1e-12)
    print(f"PASS threshold trends: avg_F {avg_f[0]:.4f} -> {avg_f[-1]:.4f} "
          f"non-decreasing, P_omega {p_omega[0]:.4f} -> {p_omega[-1]:.2e} "
          f"non-increasing, min teleport F (dF>0) = {f_tel[1:].min():.4f}")


def test_quadrature_is_converged():
    scan = scan_grid(KERR_DEFAULTS, GridSpec())
    total = float(np.sum(scan.q * scan.weights))
    assert 0.995 <= total <= 1.005

    coarse = region_summary(
        build_region(KERR_DEFAULTS, GridSpec(5.0, 0.1), 0.2), KERR_DEFAULTS
    )
    fine = region_summary(
        build_region(KERR_DEFAULTS, GridSpec(5.0, 0.05), 0.2), KERR_DEFAULTS
    )
    dp = abs(coarse["P_omega"] - fine["P_omega"])
    df = abs(coarse["avg_F"] - fine["avg_F"])
    assert dp < 1e-3
    assert df < 1e-3
    print(f"PASS quadrature: full-window integral = {total:.8f}, "
          f"step-halving deltas |dP| = {dp:.2e}, |d<F>| = {df:.2e}")


def _coherent_amps(alpha: complex, cut: int) -> np.ndarray:
    """Fock amplitudes of |alpha> up to level `cut`, built independently of
    the package (log factorials, explicit normalization)."""
    k = np.arange(cut + 1)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1.0, cut + 1.0)))))
    return np.asarray(alpha, dtype=np.complex128) ** k * np.exp(
        -0.5 * abs(alpha) ** 2 - 0.5 * log_fact
    )


def test_probe_rotation_matches_truncated_fock_evolution():
    """Brute-force diagonal evolution in a truncated Fock basis: coupling a
    number state |n> to the probe multiplies probe level k by e^{-i kt n k},
    which must land exactly on the rotated coherent state, and its overlaps
    with |beta> must match the closed form used throughout the package."""
    cut = 60
    worst_state, worst_overlap = 0.0, 0.0
    for alpha in (0.8, 2.0):
        amps = _coherent_amps(alpha, cut)
        for kt in (0.3, math.pi / 100):
            for n in range(7):
                evolved = amps * np.exp(-1j * kt * n * np.arange(cut + 1))
                target = alpha * cmath.exp(-1j * kt * n)
                worst_state = max(
                    worst_state,
                    float(np.max(np.abs(evolved - _coherent_amps(target, cut)))),
                )
                for beta in (0.5, 1.0 + 0.5j, 2.0 - 1.0j):
                    brute = np.vdot(_coherent_amps(beta, cut), evolved)
                    worst_overlap = max(
                        worst_overlap, abs(brute - coherent_overlap(beta, target))
                    )
    assert worst_state <= 1e-10
    assert worst_overlap <= 1e-8
    print(f"PASS probe rotation oracle: state error {worst_state:.2e}, "
          f"overlap error {worst_overlap:.2e}")


def test_linear_phase_model_error_bound_and_effective_ratio():
    offsets = (0.1 + 0.1j, 5.0 + 5.0j, -5.0 + 5.0j, 5.0 - 5.0j, -5.0 - 5.0j,
               2.0 - 3.0j)
    worst_margin = -math.inf
    for off in offsets:
        report = linearization_diagnostics(KERR_DEFAULTS.alpha + off, KERR_DEFAULTS)
        err_q = np.abs(report.q_exact - report.q_linear)
        err_p = np.abs(report.phi_exact - report.phi_linear)
        assert np.all(err_q <= report.error_bound + 1e-9)
        assert np.all(err_p <= report.error_bound + 1e-9)
        worst_margin = max(
            worst_margin,
            float((err_q - report.error_bound).max()),
            float((err_p - report.error_bound).max()),
        )

    gentle = KerrParams(0.5, 2.0, 0.01, n_max=64)
    assert gentle.alpha * 8 * gentle.phi <= 0.3
    ax = GridSpec(5.0, 0.1).axis()[::5]
    worst_ratio = 0.0
    for y in ax:
        for x in ax:
            beta = gentle.alpha + x + 1j * y
            mag = np.abs(conditional_state(beta, gentle).coeffs[:9])
            fitted = (mag[8] / mag[0]) ** (1.0 / 8.0)
            lam_tilde = linearization_diagnostics(beta, gentle).lambda_tilde
            worst_ratio = max(worst_ratio, abs(fitted - lam_tilde) / lam_tilde)
    assert worst_ratio < 0.05
    print(f"PASS linear model: error within bound (max excess "
          f"{worst_margin:.2e} <= 0), fitted ratio off by {worst_ratio:.2%}")


def test_cli_outputs_are_thread_independent(tmp_path):
    for threads, out in ((1, "t1"), (4, "t4")):
        proc = subprocess.run(
            [sys.executable, "-m", "entconc", "kerr",
             "--threads", str(threads), "--out", out],
            capture_output=True, text=True, cwd=tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
    for name in ("fig5a.csv", "fig5b.csv", "fig6.csv", "fig7.csv"):
        assert (tmp_path / "t1" / name).read_bytes() == (
            tmp_path / "t4" / name
        ).read_bytes(), f"{name} differs across thread counts"
    s1 = json.loads((tmp_path / "t1" / "summary.json").read_text())
    s4 = json.loads((tmp_path / "t4" / "summary.json").read_text())
    s1.pop("meta")
    s4.pop("meta")
    assert s1 == s4
    print("PASS determinism: kerr data files byte-identical at "
          "--threads 1 vs 4")
