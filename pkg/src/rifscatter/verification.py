"""
Brute-force oracles for the dispersion roots, the Klein-Gordon norm and the
photon-number moments.

Each oracle is written from the defining equations with deliberately simple
numerics (sign scans, quadrature, explicit termwise sums) and does not call
into the solver modules.  ``run_all`` compares them against the main path.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.constants import c
from scipy.integrate import simpson
from scipy.optimize import brentq

from .errors import RangeTooNarrow

__all__ = [
    "OracleReport",
    "dispersion_polynomial_value",
    "default_k_range",
    "root_scan_oracle",
    "fd_group_velocity_oracle",
    "kg_norm_oracle",
    "moment_oracle",
    "run_all",
]


@dataclass(frozen=True)
class OracleReport:
    name: str
    max_abs_error: float
    samples: int
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


# -- dispersion by real-axis scanning -----------------------------------------


def dispersion_polynomial_value(medium, u, omega, k):
    """Dispersion relation with all resonance denominators multiplied out.

    H = (c^2 k^2 - omega^2) prod_i D_i - sum_i 4 pi kappa_i s^2 prod_{j != i} D_j,
    D_i = 1 - s^2 / W_i^2, s = gamma (omega + u k).
    """
    k = np.asarray(k, dtype=float)
    gam = 1.0 / math.sqrt(1.0 - (u / c) ** 2)
    s2 = (gam * (omega + u * k)) ** 2
    D = [1.0 - s2 / W**2 for _, W in medium.resonances]
    H = (c**2 * k**2 - omega**2) * D[0] * D[1] * D[2]
    for i, (kap, _) in enumerate(medium.resonances):
        others = [D[j] for j in range(3) if j != i]
        H = H - 4 * np.pi * kap * s2 * others[0] * others[1]
    return H


def default_k_range(medium, u, omega) -> tuple:
    """A k interval guaranteed to contain every real root.

    Above the top resonance every oscillator term is negative, which forces
    |k| <= omega / c.  Outside the returned range |s| exceeds the top
    resonance while |k| > omega / c, so no real root can lie there.
    """
    gam = 1.0 / math.sqrt(1.0 - (u / c) ** 2)
    W = max(W for _, W in medium.resonances)
    kap = sum(k for k, _ in medium.resonances)
    s_max = 4.0 * W * math.sqrt(1.0 + 4 * np.pi * kap)
    kmax = (s_max / gam + omega) / u + 10 * omega / c
    return (-kmax, kmax)


def root_scan_oracle(medium, u, omega, k_range=None, n_samples: int = 200_001, rel_tol: float = 1e-10):
    """Real roots k of the dispersion relation by sign-change scanning.

    The scan runs over an asinh-spaced grid (dense around k = 0, sparse at
    large |k|) and each bracket is refined by Brent's method.  Raises
    RangeTooNarrow when ``k_range`` does not enclose the guaranteed root
    bound of ``default_k_range`` or its end points are not in the asymptotic
    region where the cleared polynomial is negative.
    """
    bound = default_k_range(medium, u, omega)
    if k_range is None:
        k_range = bound
    lo, hi = k_range
    if not lo < 0 < hi:
        raise RangeTooNarrow("k range must straddle zero", k_range=k_range)
    if lo > bound[0] or hi < bound[1]:
        raise RangeTooNarrow("k range may miss real roots", k_range=k_range, bound=bound)
    k0 = max(abs(omega) / c, 1.0)
    x = np.linspace(np.arcsinh(lo / k0), np.arcsinh(hi / k0), n_samples)
    ks = k0 * np.sinh(x)
    H = dispersion_polynomial_value(medium, u, omega, ks)
    if H[0] >= 0 or H[-1] >= 0:
        raise RangeTooNarrow("scan range does not bracket all real roots", k_range=k_range)
    sign = np.sign(H)
    idx = np.nonzero(sign[:-1] * sign[1:] <= 0)[0]
    roots = []
    for i in idx:
        a, b = ks[i], ks[i + 1]
        if H[i] == 0:
            roots.append(a)
            continue
        if H[i + 1] == 0:
            continue
        f = lambda kk: float(dispersion_polynomial_value(medium, u, omega, kk))
        roots.append(brentq(f, a, b, xtol=1e-300, rtol=rel_tol, maxiter=500))
    return sorted(roots, reverse=True)


def fd_group_velocity_oracle(medium, u, omega, k, rel_step: float = 1e-3):
    """d omega / d k along the branch through (omega, k) by finite differences.

    The roots at omega + j h (j = -2..2) are located by Brent's method
    inside a small bracket around k and combined with the five-point
    stencil for dk/domega.
    """
    h = rel_step * omega
    f = lambda w, kk: float(dispersion_polynomial_value(medium, u, w, kk))

    def root_near(w, guess):
        width = 1e-3 * abs(guess) + 1e-3
        for _ in range(60):
            a, b = guess - width, guess + width
            if f(w, a) * f(w, b) < 0:
                return brentq(lambda kk: f(w, kk), a, b, xtol=1e-300, rtol=1e-15, maxiter=500)
            width *= 1.5
        raise RangeTooNarrow("no bracket found around k", k=guess, omega=w)

    k1p = root_near(omega + h, k)
    k1m = root_near(omega - h, k)
    k2p = root_near(omega + 2 * h, 2 * k1p - k)
    k2m = root_near(omega - 2 * h, 2 * k1m - k)
    dkdw = (-k2p + 8 * k1p - 8 * k1m + k2m) / (12 * h)
    return 1.0 / dkdw


# -- Klein-Gordon norm by quadrature ------------------------------------------


def _five_point_derivative(y, dx):
    d = np.empty_like(y)
    d[2:-2] = (-y[4:] + 8 * y[3:-1] - 8 * y[1:-3] + y[:-4]) / (12 * dx)
    d[:2] = d[2]
    d[-2:] = d[-3]
    return d


def kg_norm_oracle(mode, box_length: float, medium, u: float, points_per_wavelength: int = 4000) -> float:
    """Klein-Gordon self-product of a plane-wave mode integrated over a box.

    The amplitudes (A, P_1, P_2, P_3) are taken from ``mode.W``; the fields
    are sampled on an x grid, spatial derivatives are taken with a
    five-point stencil, the canonical momenta are rebuilt from the
    comoving-frame Hopfield Lagrangian,

        Pi_A   = (d_t A) / (4 pi c^2)
        Pi_P_i = gamma^2 (d_t P_i - u d_x P_i) / (kappa_i W_i^2) + gamma A / c,

    and i (q^* Pi - Pi^* q) is integrated with Simpson's rule.
    """
    omega = mode.mode.omega
    k = complex(mode.mode.k)
    if abs(k.imag) > 0:
        raise ValueError("kg_norm_oracle needs a propagating mode")
    k = k.real
    gam = 1.0 / math.sqrt(1.0 - (u / c) ** 2)
    amps = np.asarray(mode.W[:4], dtype=complex)
    # Cover the box with enough samples for the stencil to be exact to ~1e-12.
    lam = 2 * np.pi / abs(k)
    n = int(max(points_per_wavelength * box_length / lam, 2000)) | 1
    x = np.linspace(0.0, box_length, n)
    dx = x[1] - x[0]
    phase = np.exp(1j * k * x)
    fields = [a * phase for a in amps]
    dt = [-1j * omega * f for f in fields]
    dxf = [_five_point_derivative(f, dx) for f in fields]
    A = fields[0]
    pi_A = dt[0] / (4 * np.pi * c**2)
    density = 1j * (A.conj() * pi_A - pi_A.conj() * A)
    for i, (kap, W) in enumerate(medium.resonances):
        P = fields[1 + i]
        pi_P = gam**2 * (dt[1 + i] - u * dxf[1 + i]) / (kap * W**2) + gam * A / c
        density = density + 1j * (P.conj() * pi_P - pi_P.conj() * P)
    return float(simpson(density.real, x=x))


# -- photon-number moments by termwise sums -----------------------------------


def _trapezoid_weights(w):
    w = np.asarray(w, dtype=float)
    if len(w) == 1:
        return np.array([1.0])
    wt = np.zeros_like(w)
    wt[1:] += 0.5 * np.diff(w)
    wt[:-1] += 0.5 * np.diff(w)
    return wt


def _curly_S(res):
    """S with the rows of negative-norm out modes complex conjugated."""
    g = np.diag(res.g)
    S = np.array(res.S, dtype=complex)
    return np.where((g < 0)[:, None], S.conj(), S)


def moment_oracle(S_grid: Sequence, alphas: tuple, filters, tau: float = 1.0) -> dict:
    """Covariance and variances by explicit fourth-moment bookkeeping.

    Every frequency integral becomes a sum over grid points with trapezoid
    weights w_a, and every Dirac delta delta(omega_a - omega_b) becomes
    delta_ab / w_a.  The normally ordered fourth moment is summed term by
    term (the opposite-norm, same-norm and disconnected terms), and the
    variance uses the not-normally-ordered moment, i.e. the same sum plus
    the commutator term.

    ``filters`` are (lo, hi) intervals; a grid point is inside a filter
    when lo <= omega <= hi.
    """
    grid = sorted(S_grid, key=lambda r: r.omega)
    w = np.array([r.omega for r in grid])
    wt = _trapezoid_weights(w)
    n = len(grid)
    a1, a2 = alphas
    (l1, h1), (l2, h2) = filters
    t1 = ((w >= l1) & (w <= h1)).astype(float)
    t2 = ((w >= l2) & (w <= h2)).astype(float)

    def info(res, name):
        i = res.out_order.index(name)
        g = np.diag(res.g)
        sgn = int(g[i])
        phys = np.array([not nm.startswith("c") for nm in res.in_order])
        opposite = (g == -sgn) & phys
        return i, sgn, opposite

    cS = [_curly_S(r) for r in grid]
    i1, s1, opp1 = info(grid[0], a1)
    i2, s2, opp2 = info(grid[0], a2)

    def n_of(a, i, opp):
        return float(np.sum(np.abs(cS[a][i, opp]) ** 2))

    N1 = tau / (2 * np.pi) * sum(wt[a] * t1[a] * n_of(a, i1, opp1) for a in range(n))
    N2 = tau / (2 * np.pi) * sum(wt[a] * t2[a] * n_of(a, i2, opp2) for a in range(n))

    # <a1^dag(w) a2^dag(w') a2(w'') a1(w''')> with filters t1 t2 t2 t1.
    same_norm = s1 == s2
    total = 0.0 + 0.0j
    for a in range(n):
        for b in range(n):
            for cc in range(n):
                for d in range(n):
                    f = wt[a] * wt[b] * wt[cc] * wt[d] * t1[a] * t2[b] * t2[cc] * t1[d]
                    if f == 0:
                        continue
                    term = 0.0j
                    # opposite norms: delta(w - w') delta(w'' - w''')
                    if not same_norm and a == b and cc == d:
                        s_ab = np.sum(cS[a][i1, opp1].conj() * cS[b][i2, opp1].conj())
                        s_cd = np.sum(cS[cc][i2, opp1] * cS[d][i1, opp1])
                        term += s_ab * s_cd / (wt[a] * wt[cc])
                    # same norm: delta(w - w'') delta(w' - w''')
                    if same_norm and a == cc and b == d:
                        s_ac = np.sum(cS[a][i1, opp1].conj() * cS[cc][i2, opp1])
                        s_bd = np.sum(cS[b][i2, opp2].conj() * cS[d][i1, opp2])
                        term += s_ac * s_bd / (wt[a] * wt[b])
                    # disconnected: delta(w - w''') delta(w' - w'')
                    if a == d and b == cc:
                        s_ad = np.sum(np.abs(cS[a][i1, opp1]) ** 2)
                        s_bc = np.sum(np.abs(cS[b][i2, opp2]) ** 2)
                        term += s_ad * s_bc / (wt[a] * wt[b])
                    total += f * term
    cov = (tau / (2 * np.pi)) ** 2 * total.real - N1 * N2

    def var_of(t, i, opp, N):
        # <b^dag(w) b(w') b^dag(w'') b(w''')>: normal part plus commutator term.
        acc = 0.0
        for a in range(n):
            for b in range(n):
                for cc in range(n):
                    for d in range(n):
                        f = wt[a] * wt[b] * wt[cc] * wt[d] * t[a] * t[b] * t[cc] * t[d]
                        if f == 0:
                            continue
                        term = 0.0
                        if a == b and cc == d:
                            term += n_of(a, i, opp) * n_of(cc, i, opp) / (wt[a] * wt[cc])
                        if a == d and b == cc:
                            term += n_of(a, i, opp) * n_of(b, i, opp) / (wt[a] * wt[b])
                        if b == cc and a == d:
                            term += n_of(a, i, opp) / (wt[b] * wt[a])
                        acc += f * term
        return (tau / (2 * np.pi)) ** 2 * acc - N * N

    return {
        "cov": float(cov),
        "var": (float(var_of(t1, i1, opp1, N1)), float(var_of(t2, i2, opp2, N2))),
        "N": (float(N1), float(N2)),
    }


# -- suite --------------------------------------------------------------------


def _report(name, errors, tol):
    err = float(max(errors)) if errors else float("nan")
    return OracleReport(name, err, len(errors), tol, bool(errors) and err < tol)


def _random_configs(rng, n):
    """Random (delta_n, u, omega) triples with at least one frequency per scenario family."""
    from .medium import FUSED_SILICA, StepConfig, velocity_from_center_wavelength

    out = []
    for _ in range(n):
        lam_c = rng.uniform(350e-9, 1000e-9)
        u = velocity_from_center_wavelength(FUSED_SILICA, lam_c)
        dn = 10 ** rng.uniform(-6, -2)
        step = StepConfig(FUSED_SILICA, dn, u)
        omega = 10 ** rng.uniform(12.5, 14.8)
        out.append((step, omega))
    return out


def random_quasi_unitary(rng, g_diag):
    """Random element of U(p, q) as expm(g A) with A anti-Hermitian."""
    from scipy.linalg import expm

    n = len(g_diag)
    X = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) * 0.4
    A = X - X.conj().T
    return expm(np.diag(g_diag) @ A)


def run_all(n_configs: int = 100, seed: int = 0, quick: bool = False) -> list:
    """Compare every oracle with the main path on randomized configurations."""
    from types import SimpleNamespace

    from .errors import RifError
    from .modes import build_local_mode, dispersion_roots, group_velocity, solve_modes
    from .observables import DetectorFilter, covariance, photon_number, variance

    rng = np.random.default_rng(seed)
    n_cfg = 10 if quick else n_configs
    root_err, gv_err, kg_err = [], [], []
    for step, omega in _random_configs(rng, n_cfg):
        med = step.right_medium
        try:
            ks = dispersion_roots(med, step.u, omega)
            modes = solve_modes(med, step.u, omega, "R")
        except RifError:
            continue
        real_main = sorted((k.real for k in ks if k.imag == 0), reverse=True)
        scan = root_scan_oracle(med, step.u, omega, n_samples=20_001 if quick else 200_001)
        if len(scan) != len(real_main):
            root_err.append(float("inf"))
        else:
            root_err.append(max(abs(a - b) / abs(b) for a, b in zip(scan, real_main)))
        for m in modes:
            if not m.propagating:
                continue
            vg = group_velocity(med, step.u, omega, m.k.real)
            vfd = fd_group_velocity_oracle(med, step.u, omega, m.k.real)
            gv_err.append(abs(vg - vfd) / max(abs(vfd), 1e-3 * c))
            lm = build_local_mode(med, step.u, omega, m.k, m)
            L = 3 * 2 * np.pi / abs(m.k.real)
            q = kg_norm_oracle(lm, L, med, step.u)
            kg_err.append(abs(q - lm.kg_norm_density * L) / abs(lm.kg_norm_density * L))

    # Moments on synthetic quasi-unitary S grids with the physical signature.
    g_diag = np.array([1, 1, 1, 1, 1, -1, -1, -1], dtype=float)
    names = ["p1", "p2", "p3", "p4", "p5", "n1", "n2", "n3"]
    mom_err = []
    for _ in range(n_cfg):
        npts = int(rng.integers(2, 6))
        ws = np.sort(rng.uniform(1.0, 2.0, npts))
        ws[0], ws[-1] = 1.0, 2.0
        grid = [
            SimpleNamespace(omega=float(w), S=random_quasi_unitary(rng, g_diag), g=np.diag(g_diag), in_order=names, out_order=names)
            for w in ws
        ]
        a = names[int(rng.integers(0, 5))]
        b = names[int(rng.integers(5, 8))] if rng.random() < 0.5 else names[int(rng.integers(0, 5))]
        f = DetectorFilter((1.0, 2.0), tau=float(rng.uniform(0.5, 3.0)))
        ref = moment_oracle(grid, (a, b), ((1.0, 2.0), (1.0, 2.0)), tau=f.tau)
        cov = covariance(grid, a, b, (f, f), check=False) if a != b else None
        errs = []
        if cov is not None:
            errs.append(abs(cov - ref["cov"]) / max(abs(ref["cov"]), 1e-300))
        N1 = photon_number(grid, a, f)
        errs.append(abs(variance(N1, f) - ref["var"][0]) / ref["var"][0])
        mom_err.append(max(errs))

    return [
        _report("root_scan", root_err, 1e-8),
        _report("group_velocity_fd", gv_err, 1e-6),
        _report("kg_norm", kg_err, 1e-8),
        _report("moments", mom_err, 1e-10),
    ]
