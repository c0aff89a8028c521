import numpy as np
import pytest
from scipy.constants import c

from rifscatter.medium import FUSED_SILICA, StepConfig
from rifscatter.modes import SLOT_LABELS, horizon_intervals
from rifscatter.scattering import scatter

from conftest import interval_point

EXPECTED_OUT = {
    "a": ["uL", "uoL", "lL", "cL", "cR", "nlL", "noL", "nuL"],
    "b": ["uL", "uoL", "loL", "lL", "cR", "nlL", "noL", "nuL"],
    "c": ["uL", "uoL", "moR", "loL", "lL", "nlL", "noL", "nuL"],
    "d": ["uL", "moR", "loL", "lL", "cL", "nlL", "noL", "nuL"],
    "e": ["uL", "loL", "lL", "cL", "cR", "nlL", "noL", "nuL"],
}


@pytest.mark.parametrize("case", list("abcde"))
def test_out_basis_and_signature(step, scenario_omegas, case):
    res = scatter(step, scenario_omegas[case])
    assert res.scenario.case == case
    assert res.out_order == EXPECTED_OUT[case]
    np.testing.assert_array_equal(np.diag(res.g), [1, 1, 1, 1, 1, -1, -1, -1])


@pytest.mark.parametrize("case", list("abcde"))
def test_quasi_unitarity_and_row_norms(step, scenario_omegas, case):
    res = scatter(step, scenario_omegas[case])
    S, g = res.S, res.g
    assert np.abs(S.conj().T @ g @ S - g).max() < 1e-10
    assert np.abs(res.row_norms() - np.diag(g)).max() < 1e-10


@pytest.mark.parametrize("case", list("abcde"))
def test_left_and_right_routes_agree(step, scenario_omegas, case):
    assert scatter(step, scenario_omegas[case]).lr_consistency < 1e-10


@pytest.mark.parametrize("dn", [1e-6, 1e-4, 1e-2])
def test_quasi_unitarity_across_horizon_intervals(dn):
    s = StepConfig(FUSED_SILICA, dn, 2 * c / 3)
    hi = horizon_intervals(s)
    for interval in (hi.whi, hi.bhi):
        for x in (1e-4, 0.1, 0.5, 0.9, 1 - 1e-4):
            assert scatter(s, interval_point(interval, x)).quasi_unitarity_residual < 1e-8


def test_zero_step_is_identity(scenario_omegas):
    s = StepConfig(FUSED_SILICA, 0.0, 2 * c / 3)
    res = scatter(s, scenario_omegas["c"])
    assert np.abs(res.S - np.eye(8)).max() < 1e-12


def test_scattering_matches_direct_matching_solution():
    # Build each in mode from c_L = A c_R by hand and read off its outgoing
    # amplitudes; in scenario c only the mo slot on the right is outgoing.
    s = StepConfig(FUSED_SILICA, 1e-3, 2 * c / 3)
    hi = horizon_intervals(s)
    res = scatter(s, np.sqrt(hi.whi[1] * hi.bhi[0]))
    A = res.match.A_mat
    mo = SLOT_LABELS.index("mo")
    M = np.zeros((8, 8), complex)
    for j, name in enumerate(res.in_order):
        slot = SLOT_LABELS.index(name[:-1])
        cR = np.zeros(8, complex)
        cL_in = np.zeros(8, complex)
        (cR if name[-1] == "R" else cL_in)[slot] = 1
        lhs = np.eye(8, dtype=complex)
        lhs[:, mo] = -A[:, mo]
        x = np.linalg.solve(lhs, A @ cR - cL_in)
        amps = {f"{lab}L": x[i] for i, lab in enumerate(SLOT_LABELS) if i != mo}
        amps["moR"] = x[mo]
        M[:, j] = [amps[a] for a in res.out_order]
    assert np.abs(M - res.S).max() < 1e-12


def test_particle_creation_grows_with_step(step, scenario_omegas):
    w = scenario_omegas["c"]
    small = scatter(step, w)
    big = scatter(StepConfig(FUSED_SILICA, 1e-4, step.u), w)
    i = small.out_order.index("noL")
    mix = lambda r: float((np.abs(r.S[i, :5]) ** 2).sum())
    assert 0 < mix(small) < mix(big)


def test_observables_invariant_under_rephasing(step, scenario_omegas):
    from dataclasses import replace

    from rifscatter.observables import fluxes, pearson

    res = scatter(step, scenario_omegas["d"])
    rng = np.random.default_rng(5)
    d_out = np.diag(np.exp(2j * np.pi * rng.random(8)))
    d_in = np.diag(np.exp(2j * np.pi * rng.random(8)))
    other = replace(res, S=d_out @ res.S @ d_in.conj())
    np.testing.assert_allclose(np.abs(other.S) ** 2, np.abs(res.S) ** 2, rtol=1e-12, atol=1e-30)
    for name, phi in fluxes(res).items():
        assert fluxes(other)[name] == pytest.approx(phi, rel=1e-12)
    assert pearson(other, "noL", "moR") == pytest.approx(pearson(res, "noL", "moR"), rel=1e-12)


def test_scenario_c_closed_form():
    s = StepConfig(FUSED_SILICA, 1e-3, 2 * c / 3)
    hi = horizon_intervals(s)
    res = scatter(s, np.sqrt(hi.whi[1] * hi.bhi[0]))
    A, S = res.match.A_mat, res.S
    m = SLOT_LABELS.index("mo")
    assert S[m, m] == pytest.approx(1 / A[m, m], rel=1e-12)
    for j in range(8):
        if j != m:
            assert S[m, j] == pytest.approx(-A[m, j] / A[m, m], abs=1e-14)
            for i in range(8):
                if i != m:
                    assert S[i, j] == pytest.approx(A[i, j] - A[i, m] * A[m, j] / A[m, m], abs=1e-14)


def test_identity_approached_monotonically(scenario_omegas):
    # As the step vanishes the horizon intervals shrink onto their edges, so
    # probe frequencies stay clear of them.
    ws = [scenario_omegas[k] for k in "ace"]
    dev = []
    for dn in (1e-8, 1e-10):
        s = StepConfig(FUSED_SILICA, dn, 2 * c / 3)
        dev.append(max(np.abs(scatter(s, w).S - np.eye(8)).max() for w in ws))
    assert dev[1] < dev[0] and dev[1] < 1e-6
