import math

import numpy as np
import pytest

from entconc import (
    CavityParams,
    ZeroProbabilityError,
    apply_filter,
    canonicalize_phase,
    cavity_filter,
    cavity_schmidt,
    cavity_success_prob_analytic,
    evolve_atom_field,
    teleport_fidelity,
    tmsv_state,
    von_neumann_entropy,
)


def _dist_up_to_sign(a, b) -> float:
    """Ladder distance ignoring the residual global +-1 of canonicalization."""
    return min(
        float(np.max(np.abs(a - b))),
        float(np.max(np.abs(a + b))),
    )


def test_params_validation_and_angle_reduction():
    with pytest.raises(ValueError):
        CavityParams(1.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        CavityParams(-0.1, 0.1, 0.1)
    p = CavityParams(0.5, 0.7 + 2 * math.pi, 0.9 - 4 * math.pi)
    assert p.phi == pytest.approx(0.7, abs=1e-12)
    assert p.phi0 == pytest.approx(0.9, abs=1e-12)
    assert -math.pi < p.phi <= math.pi


def test_filter_never_needs_rescaling():
    for phi in np.linspace(-3.0, 3.0, 7):
        for phi0 in np.linspace(-3.0, 3.0, 7):
            filt = cavity_filter(CavityParams(0.5, float(phi), float(phi0)), 30)
            assert filt.input_scale == 1.0
            assert float(np.max(np.abs(filt.values))) <= 1.0


def test_atom_field_state_is_normalized():
    for phi in np.linspace(-2.0, 2.0, 5):
        for phi0 in np.linspace(-2.0, 2.0, 5):
            params = CavityParams(0.5, float(phi), float(phi0))
            joint = evolve_atom_field(params)
            total = joint.ground_probability + joint.excited_probability
            assert abs(total - 1.0) < 1e-12
            assert joint.ground_probability == pytest.approx(
                cavity_success_prob_analytic(params), abs=1e-10
            )


def test_branches_are_complementary_per_level():
    """|g_n|^2 + |e_n|^2 recovers the input weight at every ladder level."""
    params = CavityParams(0.5, 0.9, -1.3)
    joint = evolve_atom_field(params)
    base = tmsv_state(0.5)
    per_level = np.abs(joint.g_branch) ** 2 + np.abs(joint.e_branch) ** 2
    np.testing.assert_allclose(per_level, base.probabilities, atol=1e-14)


def test_three_routes_agree():
    """Unitary evolution + detection, filter application, and the closed-form
    ladder produce the same conditional state and probability."""
    for lam in (0.5, 0.7):
        for phi in np.linspace(-3.0, 3.0, 10):
            for phi0 in np.linspace(-3.0, 3.0, 10):
                params = CavityParams(lam, float(phi), float(phi0))

                evolved, p_a = evolve_atom_field(params).project_ground()
                a = canonicalize_phase(evolved)

                base = tmsv_state(lam)
                filtered, p_b = apply_filter(
                    base, cavity_filter(params, base.n_max)
                )
                b = canonicalize_phase(filtered)

                c, p_c = cavity_schmidt(params)

                assert _dist_up_to_sign(a.coeffs, c.coeffs) < 1e-12
                assert _dist_up_to_sign(b.coeffs, c.coeffs) < 1e-12
                assert _dist_up_to_sign(a.coeffs, b.coeffs) < 1e-12
                assert abs(p_a - p_c) < 1e-12
                assert abs(p_b - p_c) < 1e-12


def test_success_probability_closed_form_on_grid():
    for lam in (0.1, 0.3, 0.5, 0.7, 0.9):
        base = tmsv_state(lam)
        for phi in np.linspace(-3.0, 3.0, 20):
            for phi0 in np.linspace(-3.0, 3.0, 20):
                params = CavityParams(lam, float(phi), float(phi0))
                _, prob = apply_filter(base, cavity_filter(params, base.n_max))
                assert abs(prob - cavity_success_prob_analytic(params)) < 1e-10


def test_phase_periodicity():
    p0 = CavityParams(0.5, 0.7, 0.9)
    p2 = CavityParams(0.5, 0.7, 0.9 + 2 * math.pi)
    p4 = CavityParams(0.5, 0.7, 0.9 + 4 * math.pi)
    assert cavity_success_prob_analytic(p2) == pytest.approx(
        cavity_success_prob_analytic(p0), abs=1e-12
    )
    s0, _ = cavity_schmidt(p0)
    s2, _ = cavity_schmidt(p2)
    s4, _ = cavity_schmidt(p4)
    np.testing.assert_allclose(
        np.abs(s2.coeffs), np.abs(s0.coeffs), atol=1e-12
    )
    np.testing.assert_allclose(s4.coeffs, s0.coeffs, atol=1e-12)


def test_uniform_filter_limit():
    """phi = 0, phi0 = pi makes every amplitude sin(-pi/2) = -1: detection is
    certain and the ladder passes through unchanged."""
    params = CavityParams(0.5, 0.0, math.pi)
    state, prob = cavity_schmidt(params)
    assert prob == pytest.approx(1.0, abs=1e-12)
    base = tmsv_state(0.5)
    assert _dist_up_to_sign(state.coeffs, base.coeffs) < 1e-12
    assert teleport_fidelity(state).fidelity == pytest.approx(0.75, abs=1e-9)


def test_zero_probability_branch_raises():
    with pytest.raises(ZeroProbabilityError):
        cavity_schmidt(CavityParams(0.0, 0.3, 0.0))
    with pytest.raises(ZeroProbabilityError):
        evolve_atom_field(CavityParams(0.0, 0.3, 0.0)).project_ground()


def test_detection_can_concentrate_entanglement():
    params = CavityParams(0.5, math.pi / 10, -math.pi / 10)
    state, prob = cavity_schmidt(params)
    s_out = von_neumann_entropy(state)
    s_in = von_neumann_entropy(tmsv_state(0.5))
    assert s_in == pytest.approx(0.7497801928250778, abs=1e-12)
    assert s_out == pytest.approx(1.4136818333795431, abs=1e-9)
    assert s_out > s_in
    assert prob == pytest.approx(0.052114395181940276, abs=1e-12)
    assert teleport_fidelity(state).fidelity > 0.83
