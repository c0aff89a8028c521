import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import c, e, hbar

from rifscatter.errors import BoundaryFrequency, NoHorizon, NullSpaceDimension, ZeroDenominator
from rifscatter.medium import FUSED_SILICA, StepConfig, refractive_index
from rifscatter.modes import (
    build_local_mode,
    classify_scenario,
    dispersion_residual,
    dispersion_roots,
    field_transform,
    group_velocity,
    horizon_intervals,
    optical_branch_extrema,
    solve_modes,
)

U = 2 * c / 3


def test_eight_roots_on_shell(scenario_omegas):
    for w in scenario_omegas.values():
        ks = dispersion_roots(FUSED_SILICA, U, w)
        assert len(ks) == 8
        assert dispersion_residual(FUSED_SILICA, U, w, ks).max() < 1e-12


def test_scenario_c_has_eight_real_roots_each_side(step, scenario_omegas):
    w = scenario_omegas["c"]
    for side in "LR":
        modes = solve_modes(step.medium(side), step.u, w, side)
        assert all(m.propagating for m in modes)
        assert [m.label for m in modes] == ["u", "uo", "mo", "lo", "l", "nl", "no", "nu"]
        assert [m.norm_sign for m in modes] == [1, 1, 1, 1, 1, -1, -1, -1]


def test_evanescent_pair_slots(step, scenario_omegas):
    below = solve_modes(step.right_medium, step.u, scenario_omegas["a"], "R")
    above = solve_modes(step.right_medium, step.u, scenario_omegas["e"], "R")
    assert [m.slot for m in below if not m.propagating] == [2, 3]
    assert [m.slot for m in above if not m.propagating] == [1, 2]
    pair = [m for m in below if not m.propagating]
    assert pair[0].k == pytest.approx(pair[1].k.conjugate())


def test_identical_media_have_identical_roots(scenario_omegas):
    s = StepConfig(FUSED_SILICA, 0.0, U)
    w = scenario_omegas["c"]
    np.testing.assert_array_equal(dispersion_roots(s.left_medium, U, w), dispersion_roots(s.right_medium, U, w))


@settings(max_examples=30, deadline=None)
@given(logw=st.floats(12.0, 15.3))
def test_roots_sorted_and_conjugate_closed(logw):
    ks = dispersion_roots(FUSED_SILICA, U, 10**logw)
    assert np.all(np.diff(ks.real) <= 0)
    cplx = ks[ks.imag != 0]
    assert len(cplx) % 2 == 0
    for a, b in zip(cplx[::2], cplx[1::2]):
        assert a.imag > 0 and b == a.conjugate()


def test_group_velocity_matches_implicit_slope(scenario_omegas):
    w = scenario_omegas["c"]
    h = 1e-6 * w
    for i, k in enumerate(dispersion_roots(FUSED_SILICA, U, w)):
        kp = dispersion_roots(FUSED_SILICA, U, w + h)[i].real
        km = dispersion_roots(FUSED_SILICA, U, w - h)[i].real
        assert group_velocity(FUSED_SILICA, U, w, k.real) == pytest.approx(2 * h / (kp - km), rel=1e-5)


def test_branch_edges_have_vanishing_group_velocity():
    ext = optical_branch_extrema(FUSED_SILICA, U)
    g = 1 / np.sqrt(1 - (U / c) ** 2)
    for W, w in ((ext["Omega_min"], ext["omega_min"]), (ext["Omega_max"], ext["omega_max"])):
        K = float(refractive_index(FUSED_SILICA, W)) * W / c
        k = g * (K - U * W / c**2)
        assert abs(group_velocity(FUSED_SILICA, U, w, k, tol=0)) < 1e-6 * c
        with pytest.raises(ZeroDenominator):
            group_velocity(FUSED_SILICA, U, w, k)


def test_horizon_interval_order_and_widths(intervals):
    hi = intervals
    assert hi.whi[0] < hi.whi[1] < hi.bhi[0] < hi.bhi[1]
    to_ueV = hbar / (1e-6 * e)
    assert 0.5 < hi.whi_width * to_ueV < 1.5
    assert 5 < hi.bhi_width * to_ueV < 15


def test_zero_step_has_zero_width_intervals():
    hi = horizon_intervals(StepConfig(FUSED_SILICA, 0.0, U))
    assert hi.whi_width == 0 and hi.bhi_width == 0


def test_large_step_loses_white_hole():
    with pytest.raises(NoHorizon):
        horizon_intervals(StepConfig(FUSED_SILICA, 0.1, U))


def test_front_faster_than_light_branch_has_no_horizon():
    with pytest.raises(NoHorizon):
        optical_branch_extrema(FUSED_SILICA, 0.9 * c)


def test_classification_per_scenario(step, scenario_omegas):
    for case, w in scenario_omegas.items():
        assert classify_scenario(step, w).case == case


def test_classification_rejects_edges(step, intervals):
    with pytest.raises(BoundaryFrequency):
        classify_scenario(step, intervals.whi[0])


def test_mode_vectors_normalized(step, scenario_omegas):
    w = scenario_omegas["c"]
    for side in "LR":
        med = step.medium(side)
        U_mat = field_transform(med, step.u, w)
        for m in solve_modes(med, step.u, w, side):
            lm = build_local_mode(med, step.u, w, m.k, m)
            assert np.abs(lm.V - U_mat @ lm.W).max() <= 1e-12 * np.abs(lm.V).max()
            assert lm.flux_normalization == pytest.approx(m.norm_sign, abs=1e-10)


def test_evanescent_vectors_have_unit_norm(step, scenario_omegas):
    w = scenario_omegas["a"]
    for m in solve_modes(step.right_medium, step.u, w, "R"):
        if not m.propagating:
            lm = build_local_mode(step.right_medium, step.u, w, m.k, m)
            assert np.linalg.norm(lm.W) == pytest.approx(1.0)
            assert lm.flux_normalization is None


def test_off_shell_wavenumber_has_no_null_space(scenario_omegas):
    w = scenario_omegas["c"]
    k = dispersion_roots(FUSED_SILICA, U, w)[3].real * 1.01
    with pytest.raises(NullSpaceDimension):
        build_local_mode(FUSED_SILICA, U, w, k)


def test_norm_sign_follows_lab_frequency(scenario_omegas):
    for w in scenario_omegas.values():
        for m in solve_modes(FUSED_SILICA, U, w, "R"):
            if m.propagating:
                assert m.norm_sign == np.sign(m.Omega.real)
