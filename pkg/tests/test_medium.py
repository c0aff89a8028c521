import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import c

from rifscatter.errors import ConfigError
from rifscatter.medium import (
    FUSED_SILICA,
    MediumSpec,
    StepConfig,
    group_index,
    lab_to_moving,
    lorentz_to_lab,
    mu_exact,
    mu_linear,
    parse_velocity,
    refractive_index,
    velocity_from_center_wavelength,
)


def omega_of(lam):
    return 2 * np.pi * c / lam


def malitson(lam_um):
    """Fused-silica Sellmeier fit in the usual B/C form, as an independent check."""
    B = (0.6961663, 0.4079426, 0.8974794)
    C = (0.0684043, 0.1162414, 9.896161)
    l2 = lam_um**2
    return math.sqrt(1 + sum(b * l2 / (l2 - cc**2) for b, cc in zip(B, C)))


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.8, 1.06, 1.55, 2.0])
def test_fused_silica_index_matches_sellmeier_fit(lam):
    n = float(refractive_index(FUSED_SILICA, omega_of(lam * 1e-6)))
    assert n == pytest.approx(malitson(lam), abs=2e-4)


def test_group_index_is_derivative_of_phase_index():
    W = omega_of(800e-9)
    h = W * 1e-6
    nW = lambda x: float(refractive_index(FUSED_SILICA, x)) * x
    fd = (nW(W + h) - nW(W - h)) / (2 * h)
    assert float(group_index(FUSED_SILICA, W)) == pytest.approx(fd, rel=1e-9)


def test_zero_dispersion_wavelength_near_1270nm():
    lams = np.linspace(1.1e-6, 1.5e-6, 4001)
    ng = group_index(FUSED_SILICA, omega_of(lams))
    assert 1.25e-6 < lams[np.argmin(ng)] < 1.30e-6


def test_medium_invariants():
    with pytest.raises(ConfigError):
        MediumSpec(((0.1, 1e15), (0.1, 2e15)))
    with pytest.raises(ConfigError):
        MediumSpec(((0.1, 2e15), (0.1, 1e15), (0.1, 3e15)))
    with pytest.raises(ConfigError):
        MediumSpec(((-0.1, 1e15), (0.1, 2e15), (0.1, 3e15)))


def test_step_invariants():
    with pytest.raises(ConfigError):
        StepConfig(FUSED_SILICA, 1e-6, 1.2 * c)
    with pytest.raises(ConfigError):
        StepConfig(FUSED_SILICA, -1e-6, 0.5 * c)
    with pytest.raises(ConfigError):
        StepConfig(FUSED_SILICA, 1e-6, 0.5 * c, mu_method="quadratic")


def test_zero_step_gives_identical_media():
    s = StepConfig(FUSED_SILICA, 0.0, 2 * c / 3)
    assert s.mu == 1.0
    assert s.left_medium == s.right_medium


@pytest.mark.parametrize("dn", [1e-6, 1e-4, 1e-2])
def test_exact_mu_reproduces_step_height(dn):
    s = StepConfig(FUSED_SILICA, dn, 2 * c / 3, mu_method="exact")
    W = omega_of(800e-9)
    n_L = float(refractive_index(s.left_medium, W))
    assert n_L - s.n_R == pytest.approx(dn, rel=1e-9)


def test_linear_mu_close_to_exact_for_small_steps():
    # The linear rule ignores the shift of the resonances, which costs a
    # couple of percent in mu - 1 at 800 nm.
    n = float(refractive_index(FUSED_SILICA, omega_of(800e-9)))
    lin = mu_linear(n, 2e-6) - 1
    exact = mu_exact(FUSED_SILICA, 2e-6, 800e-9) - 1
    assert lin == pytest.approx(exact, rel=3e-2)
    assert mu_linear(n, 2e-6) - 1 == pytest.approx(2 * 2e-6 / (n - 1 / n))


def test_scaled_medium_scales_resonances():
    m = FUSED_SILICA.scaled(1.01)
    np.testing.assert_allclose(m.kappas, 1.01 * FUSED_SILICA.kappas)
    np.testing.assert_allclose(m.omegas**2, FUSED_SILICA.omegas**2 / 1.01)


@settings(max_examples=200, deadline=None)
@given(
    omega=st.floats(-1e16, 1e16),
    k=st.floats(-1e8, 1e8),
    beta=st.floats(-0.99, 0.99),
)
def test_lorentz_round_trip(omega, k, beta):
    u = beta * c
    Om, K = lorentz_to_lab(omega, k, u)
    w2, k2 = lab_to_moving(Om, K, u)
    # Relative to the size of the four-vector, the only scale cancellation respects.
    scale = abs(omega) + c * abs(k)
    assert abs(w2 - omega) <= 1e-12 * scale
    assert c * abs(k2 - k) <= 1e-12 * scale
    # The interval Omega^2 - c^2 K^2 is invariant.
    assert abs((Om**2 - c**2 * K**2) - (omega**2 - c**2 * k**2)) <= 1e-12 * scale**2 / (1 - beta**2)


def test_lorentz_trivial_cases():
    assert lorentz_to_lab(0.0, 0.0, 0.5 * c) == (0.0, 0.0)
    assert lorentz_to_lab(3e14, 2e6, 0.0) == (3e14, 2e6)


def test_parse_velocity_forms():
    assert parse_velocity("2/3c") == pytest.approx(2 * c / 3)
    assert parse_velocity("0.6667c") == pytest.approx(0.6667 * c)
    assert parse_velocity("2e8") == 2e8
    with pytest.raises(ConfigError):
        parse_velocity("fast")


def test_center_wavelength_velocity_is_group_velocity():
    u = velocity_from_center_wavelength(FUSED_SILICA, 800e-9)
    assert u / c == pytest.approx(1 / float(group_index(FUSED_SILICA, omega_of(800e-9))))
    # 800 nm and 1990 nm share the same group velocity.
    assert velocity_from_center_wavelength(FUSED_SILICA, 1990e-9) == pytest.approx(u, rel=2e-4)
