import math

import numpy as np
import pytest

from entconc import (
    CavityParams,
    EmptyRegionError,
    GridSpec,
    KerrParams,
    SweepResult,
    average_fidelity,
    average_teleport_fidelity,
    build_region,
    cavity_schmidt,
    cavity_success_prob_analytic,
    cavity_teleport_fidelity_analytic,
    optimize_phi0,
    success_probability,
    sweep_cavity_phi0,
    sweep_kerr_threshold,
    sweep_to_csv,
    von_neumann_entropy,
)

LAM, PHI = 0.5, math.pi / 10


def test_optimum_anchors():
    report = optimize_phi0(LAM, PHI)
    # located independently by dense scanning plus parabolic refinement
    assert report.phi0_star == pytest.approx(-0.3081598, abs=1e-4)
    assert report.fidelity_star == pytest.approx(0.8371086482720582, abs=1e-9)
    assert report.probability_at_star == pytest.approx(0.05093803, abs=1e-6)
    assert 400 < report.evaluations < 500


def test_optimum_beats_scan_neighbors():
    report = optimize_phi0(LAM, PHI)
    cell = 2.0 * math.pi / 400
    for neighbor in (report.phi0_star - cell, report.phi0_star + cell):
        assert report.fidelity_star >= cavity_teleport_fidelity_analytic(
            LAM, PHI, neighbor
        )


def test_optimum_robust_to_scan_density():
    coarse = optimize_phi0(LAM, PHI, steps=400)
    fine = optimize_phi0(LAM, PHI, steps=800)
    assert abs(coarse.phi0_star - fine.phi0_star) < 1e-4


def test_optimum_degenerate_ladder():
    report = optimize_phi0(0.0, 0.3)
    assert report.fidelity_star == pytest.approx(0.5, abs=1e-12)


def test_optimizer_validation():
    with pytest.raises(ValueError):
        optimize_phi0(LAM, PHI, tol=0.0)
    with pytest.raises(ValueError):
        optimize_phi0(LAM, PHI, steps=0)


def test_report_serialization():
    payload = optimize_phi0(LAM, PHI).to_json_dict()
    assert set(payload) == {
        "phi0_star",
        "fidelity_star",
        "probability_at_star",
        "evaluations",
    }


def test_cavity_sweep_axis_and_series():
    sweep = sweep_cavity_phi0(LAM, PHI)
    axis = sweep.axis_values
    assert axis.size == 400
    assert axis[0] == pytest.approx(-math.pi + math.pi / 200, abs=1e-15)
    assert axis[-1] == pytest.approx(math.pi, abs=1e-15)
    for idx in (0, 57, 199, 313):
        params = CavityParams(LAM, PHI, float(axis[idx]))
        assert sweep.series["P"][idx] == pytest.approx(
            cavity_success_prob_analytic(params), abs=1e-14
        )
        assert sweep.series["F"][idx] == pytest.approx(
            cavity_teleport_fidelity_analytic(LAM, PHI, float(axis[idx])), abs=1e-12
        )
        state, _ = cavity_schmidt(params)
        assert sweep.series["S"][idx] == pytest.approx(
            von_neumann_entropy(state), abs=1e-12
        )


def test_cavity_sweep_marks_gaps_with_nan():
    """lam = 0 annihilates the filter output exactly at phi0 = 0: the swept
    series keep the row and mark the conditional quantities NaN."""
    sweep = sweep_cavity_phi0(0.0, 0.3)
    s, f, p = sweep.series["S"], sweep.series["F"], sweep.series["P"]
    gaps = np.where(np.isnan(s))[0]
    assert list(gaps) == [199]
    assert sweep.axis_values[199] == pytest.approx(0.0, abs=1e-15)
    assert p[199] == 0.0
    assert np.isnan(f[199])
    keep = np.ones(400, dtype=bool)
    keep[199] = False
    assert np.all(s[keep] == 0.0)
    np.testing.assert_allclose(f[keep], 0.5, atol=1e-12)


def test_sweep_to_csv_format():
    text = sweep_to_csv(sweep_cavity_phi0(0.0, 0.3, steps=250))
    lines = text.strip().split("\n")
    assert lines[0] == "phi0,P,S,F"
    assert len(lines) == 251
    assert ",nan" in text  # the gap row survives serialization


def test_sweep_result_validation():
    with pytest.raises(ValueError):
        SweepResult("x", np.arange(3), {"y": np.arange(4)})
    result = SweepResult("x", np.arange(3), {"y": np.arange(3)})
    payload = result.to_json_dict()
    assert payload["axis_values"] == [0.0, 1.0, 2.0]
    assert payload["series"]["y"] == [0, 1, 2]
    assert payload["truncated_at"] is None


SMALL = dict(
    params=KerrParams(0.5, 10.0, math.pi / 100, n_max=64),
    grid=GridSpec(4.0, 0.2),
)


def test_kerr_threshold_sweep_matches_region_functions():
    sweep = sweep_kerr_threshold(SMALL["params"], SMALL["grid"], [0.0, 0.1, 0.2])
    assert sweep.truncated_at is None
    np.testing.assert_array_equal(sweep.axis_values, [0.0, 0.1, 0.2])
    for i, delta in enumerate(sweep.axis_values):
        region = build_region(SMALL["params"], SMALL["grid"], float(delta))
        assert sweep.series["P_omega"][i] == pytest.approx(
            success_probability(region, SMALL["params"]), rel=1e-12
        )
        assert sweep.series["avg_F"][i] == pytest.approx(
            average_fidelity(region, SMALL["params"]), rel=1e-12
        )
        assert sweep.series["avg_F_teleport"][i] == pytest.approx(
            average_teleport_fidelity(region, SMALL["params"]), rel=1e-12
        )
        assert sweep.series["n_points"][i] == region.n_points


def test_kerr_threshold_sweep_truncates_at_first_empty():
    sweep = sweep_kerr_threshold(SMALL["params"], SMALL["grid"], [0.0, 0.7])
    assert sweep.truncated_at == 0.7
    assert sweep.axis_values.size == 1
    with pytest.raises(EmptyRegionError) as err:
        sweep_kerr_threshold(SMALL["params"], SMALL["grid"], [0.7, 0.8])
    assert err.value.max_fidelity is not None


def test_kerr_threshold_sweep_validation():
    with pytest.raises(ValueError):
        sweep_kerr_threshold(SMALL["params"], SMALL["grid"], [])
    with pytest.raises(ValueError):
        sweep_kerr_threshold(SMALL["params"], SMALL["grid"], [0.2, 0.1])
    with pytest.raises(ValueError):
        sweep_kerr_threshold(SMALL["params"], SMALL["grid"], [-0.1, 0.1])
