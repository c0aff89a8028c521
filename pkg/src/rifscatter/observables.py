"""
Measurable quantities built from the scattering matrix.

Moving-frame fluxes, photon-number covariances, variances, Pearson
coefficients and g2 functions follow from rows of S restricted to in modes
of opposite norm.  Laboratory spectra map every detector wavelength onto the
out modes that reach it with positive lab group velocity.

Conventions
-----------
* ``n_alpha = sum_{beta of opposite norm} |S_{alpha beta}|^2`` so that the
  flux density is ``phi = n / (2 pi)``.
* ``X_{alpha alpha'} = sum_{beta of norm opposite to alpha} S*_{alpha beta} S_{alpha' beta}``.
* Covariances and variances carry the factor (tau / 2 pi)^2; the
  defaults tau = 1 and unit bandwidths report raw S-matrix sums.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.constants import c

from .errors import (
    BoundaryFrequency,
    ComputeError,
    GridTooCoarse,
    NarrowbandViolated,
    NoContribution,
    NoHorizon,
    RifError,
    ZeroGroupVelocity,
)
from .medium import StepConfig, group_index, lorentz_gamma, refractive_index
from .modes import KinematicScenario, horizon_intervals, lab_group_velocity, solve_modes
from .scattering import ScatteringResult, scatter

__all__ = [
    "OUT_MODES",
    "OPTICAL_OUT_MODES",
    "DetectorFilter",
    "SpectrumPoint",
    "CorrelationResult",
    "LabContribution",
    "LabSpectrumPoint",
    "parallel_map",
    "norm_class",
    "pair_number",
    "overlap_sum",
    "flux",
    "fluxes",
    "photon_number",
    "covariance",
    "variance",
    "pearson",
    "pearson_integrated",
    "self_correlation",
    "g2",
    "correlate",
    "lab_flux",
    "lab_contributions",
    "lab_point",
    "lab_spectrum",
    "lab_correlation_map",
    "refined_grid",
    "moving_frame_spectrum",
    "table1_row",
]

# Every physical out mode that can appear, in a fixed column order.
OUT_MODES = ("uL", "uoL", "moR", "loL", "lL", "nlL", "noL", "nuL")
OPTICAL_OUT_MODES = ("noL", "uoL", "moR", "loL")


def parallel_map(func: Callable, items: Sequence, workers: int = 1) -> list:
    """Ordered map, in a process pool when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * workers))))


# -- single-frequency S-matrix sums -------------------------------------------


def norm_class(res: ScatteringResult, name: str) -> int:
    """+1 or -1 for a physical out mode, 0 for an unphysical one."""
    i = res.out_order.index(name)
    if name.startswith("c"):
        return 0
    return int(res.g[i, i])


def _opposite(res, name):
    s = norm_class(res, name)
    if s == 0:
        return np.zeros(len(res.in_order), dtype=bool)
    g = np.diag(res.g)
    phys = np.array([not n.startswith("c") for n in res.in_order])
    return (g == -s) & phys


def pair_number(res: ScatteringResult, name: str) -> float:
    """n_alpha: summed squared anomalous S elements of out mode ``name``."""
    row = res.S[res.out_order.index(name)]
    return float(np.sum(np.abs(row[_opposite(res, name)]) ** 2))


def _pair_modulus(res, a, b):
    """|X_ab| evaluated in a fixed name order.

    |X_ab| = |X_ba| holds through quasi-unitarity; fixing the order makes
    every correlation exactly symmetric under swapping the detectors.
    """
    a, b = sorted((a, b))
    return abs(overlap_sum(res, a, b))


def overlap_sum(res: ScatteringResult, a: str, b: str) -> complex:
    """X_ab = sum over beta of norm opposite to ``a`` of S*_{a beta} S_{b beta}."""
    mask = _opposite(res, a)
    ra = res.S[res.out_order.index(a)]
    rb = res.S[res.out_order.index(b)]
    if a == b:
        return complex(np.sum(np.abs(ra[mask]) ** 2))
    return complex(np.sum(ra[mask].conj() * rb[mask]))


def flux(res: ScatteringResult, alpha: str) -> float:
    """Moving-frame flux density phi = n_alpha / 2 pi (photons per unit time and bandwidth)."""
    if alpha not in res.out_order:
        return 0.0
    return pair_number(res, alpha) / (2 * np.pi)


def fluxes(res: ScatteringResult) -> dict:
    """Flux density of every physical out mode present at this frequency."""
    return {name: flux(res, name) for name in res.out_order if not name.startswith("c")}


# -- detector-filtered quantities ---------------------------------------------


@dataclass(frozen=True)
class DetectorFilter:
    """Rectangular moving-frame filter on (omega_lo, omega_hi) with interaction time tau."""

    interval: tuple
    tau: float = 1.0

    def __post_init__(self):
        lo, hi = self.interval
        if not lo < hi:
            raise ValueError(f"filter needs omega_lo < omega_hi, got {self.interval}")
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]

    def overlap(self, other: "DetectorFilter"):
        lo = max(self.interval[0], other.interval[0])
        hi = min(self.interval[1], other.interval[1])
        return (lo, hi) if hi > lo else None


def _integrate(omegas, values, lo, hi):
    """Trapezoid integral of samples on [lo, hi], interpolating the end points."""
    w = np.asarray(omegas, dtype=float)
    v = np.asarray(values)
    if lo < w[0] * (1 - 1e-12) or hi > w[-1] * (1 + 1e-12):
        raise GridTooCoarse("grid does not cover the integration interval", lo=lo, hi=hi)
    inside = (w > lo) & (w < hi)
    xs = np.concatenate([[lo], w[inside], [hi]])
    if np.iscomplexobj(v):
        ys = np.interp(xs, w, v.real) + 1j * np.interp(xs, w, v.imag)
    else:
        ys = np.interp(xs, w, v)
    return np.trapezoid(ys, xs)


def _sorted_grid(S_grid):
    grid = sorted(S_grid, key=lambda r: r.omega)
    return grid, np.array([r.omega for r in grid])


def _check_smooth(grid, names, lo, hi, tol=0.05):
    rows = []
    for r in grid:
        if lo <= r.omega <= hi:
            rows.append(np.concatenate([r.S[r.out_order.index(n)] for n in names]))
    for a, b in zip(rows, rows[1:]):
        scale = max(np.abs(a).max(), np.abs(b).max())
        if scale > 0 and np.abs(a - b).max() > tol * scale:
            raise GridTooCoarse("S varies by more than 5% between adjacent grid points", lo=lo, hi=hi)


def photon_number(S_grid: Sequence[ScatteringResult], alpha: str, filt: DetectorFilter) -> float:
    """<N> = tau * integral of phi over the filter band."""
    grid, w = _sorted_grid(S_grid)
    vals = np.array([flux(r, alpha) for r in grid])
    return float(filt.tau * _integrate(w, vals, *filt.interval))


def covariance(S_grid: Sequence[ScatteringResult], alpha: str, alpha_prime: str, filters, check: bool = True) -> float:
    """Normally ordered photon-number covariance of two filtered out modes.

    cov = (tau / 2 pi)^2 | integral over the filter overlap of X_{alpha alpha'} |^2
    """
    f1, f2 = filters
    tau = f1.tau
    band = f1.overlap(f2)
    if band is None:
        return 0.0
    grid, w = _sorted_grid(S_grid)
    if check:
        _check_smooth(grid, [alpha, alpha_prime], *band)
    first, second = sorted((alpha, alpha_prime))
    vals = np.array([overlap_sum(r, first, second) for r in grid])
    return float((tau / (2 * np.pi)) ** 2 * abs(_integrate(w, vals, *band)) ** 2)


def variance(flux_integral: float, filt: DetectorFilter) -> float:
    """var(N) = <N> (<N> + tau Delta / 2 pi) for chaotic single-mode statistics."""
    N = float(flux_integral)
    return N * (N + filt.tau * filt.width / (2 * np.pi))


def self_correlation(N: float, filt: DetectorFilter) -> float:
    """C(N, N) = <N>^2 / var(N); zero in vacuum, approaching 1 for large <N>."""
    var = variance(N, filt)
    return 0.0 if var == 0 else N * N / var


def pearson_integrated(S_grid, alpha: str, alpha_prime: str, filters) -> float:
    """Pearson coefficient from band integrals (no narrowband assumption)."""
    f1, f2 = filters
    N1 = photon_number(S_grid, alpha, f1)
    N2 = photon_number(S_grid, alpha_prime, f2)
    v1, v2 = variance(N1, f1), variance(N2, DetectorFilter(f2.interval, f1.tau))
    if v1 == 0 or v2 == 0:
        return 0.0
    return covariance(S_grid, alpha, alpha_prime, (f1, DetectorFilter(f2.interval, f1.tau))) / math.sqrt(v1 * v2)


def _bandwidth_prefactor(bandwidths):
    if bandwidths is None:
        return 1.0
    d, d1, d2 = bandwidths
    if not (d1 > 0 and d2 > 0) or d < 0 or d > min(d1, d2) * (1 + 1e-12):
        raise ValueError(f"need 0 <= Delta <= min(Delta1, Delta2), got {bandwidths}")
    return d * d / (d1 * d2)


def _check_narrowband(step, res, names, bandwidths, tol=0.01):
    half = 0.5 * max(bandwidths[1], bandwidths[2])
    ref = np.array([pair_number(res, n) for n in names])
    for w in (res.omega - half, res.omega + half):
        other = scatter(step, w)
        vals = np.array([pair_number(other, n) if n in other.out_order else 0.0 for n in names])
        if np.any(np.abs(vals - ref) > tol * np.maximum(np.abs(ref), 1e-300)):
            raise NarrowbandViolated("S varies by more than 1% across the detector bands", omega=res.omega)


def pearson(res: ScatteringResult, alpha: str, alpha_prime: str, bandwidths=None, step: Optional[StepConfig] = None) -> float:
    """Narrowband Pearson coefficient of out modes ``alpha`` and ``alpha_prime``.

    ``bandwidths = (Delta, Delta1, Delta2)`` sets the prefactor
    Delta^2 / (Delta1 Delta2); the default is matched filters.  With ``step``
    given, S is re-evaluated at the band edges and NarrowbandViolated is
    raised if the pair numbers change by more than 1%.
    """
    if step is not None and bandwidths is not None:
        _check_narrowband(step, res, (alpha, alpha_prime), bandwidths)
    # Fixed evaluation order keeps C exactly symmetric in the detectors.
    alpha, alpha_prime = sorted((alpha, alpha_prime))
    n1 = pair_number(res, alpha)
    n2 = pair_number(res, alpha_prime)
    den = math.sqrt(n1 * (n1 + 1) * n2 * (n2 + 1))
    if den == 0:
        return 0.0
    return _bandwidth_prefactor(bandwidths) * _pair_modulus(res, alpha, alpha_prime) ** 2 / den


def g2(res: ScatteringResult, alpha: str, alpha_prime: str, bandwidths=None) -> float:
    """Narrowband second-order correlation; exactly 2 for a single mode with matched filters."""
    pre = _bandwidth_prefactor(bandwidths)
    alpha, alpha_prime = sorted((alpha, alpha_prime))
    n1 = pair_number(res, alpha)
    n2 = pair_number(res, alpha_prime)
    if n1 == 0 or n2 == 0:
        # Thermal limit of a single chaotic mode, else uncorrelated.
        return 2.0 * pre if alpha == alpha_prime else pre
    return pre * (1.0 + _pair_modulus(res, alpha, alpha_prime) ** 2 / (n1 * n2))


@dataclass(frozen=True)
class CorrelationResult:
    pair: tuple
    C: float
    cov: float
    vars: tuple
    g2: float


def correlate(res: ScatteringResult, alpha: str, alpha_prime: str, tau_delta: float = 2 * np.pi) -> CorrelationResult:
    """Narrowband correlation summary with matched filters of time-bandwidth ``tau_delta``.

    The default tau Delta = 2 pi makes cov and var equal to the raw S sums.
    """
    k = tau_delta / (2 * np.pi)
    n1, n2 = pair_number(res, alpha), pair_number(res, alpha_prime)
    cov = k * k * _pair_modulus(res, alpha, alpha_prime) ** 2
    v1 = k * k * n1 * (n1 + 1)
    v2 = k * k * n2 * (n2 + 1)
    return CorrelationResult((alpha, alpha_prime), pearson(res, alpha, alpha_prime), cov, (v1, v2), g2(res, alpha, alpha_prime))


# -- moving-frame spectra -----------------------------------------------------


@dataclass
class SpectrumPoint:
    omega: float
    flux_per_mode: dict
    scenario: Optional[KinematicScenario]
    error: str = ""


def _spectrum_point(args):
    step, omega = args
    try:
        res = scatter(step, omega)
    except RifError as exc:
        return SpectrumPoint(omega, {n: float("nan") for n in OUT_MODES}, None, type(exc).__name__)
    fl = fluxes(res)
    return SpectrumPoint(omega, {n: fl.get(n, 0.0) for n in OUT_MODES}, res.scenario)


def refined_grid(step: StepConfig, omega_lo: float, omega_hi: float, n_base: int = 400, n_interval: int = 200, guard: float = 1e-8) -> np.ndarray:
    """Geometric base grid plus dense, edge-clustered points inside each horizon interval.

    Points closer than ``guard`` (relative) to a subluminal-interval edge are
    dropped so that every sample can be evaluated.
    """
    pts = [np.geomspace(omega_lo, omega_hi, n_base)]
    try:
        hi = horizon_intervals(step)
        intervals = [hi.whi, hi.bhi]
        edges = np.array(hi.edges)
    except NoHorizon:
        intervals, edges = [], np.array([])
    # Chebyshev-like spacing resolves the steep fins at both ends.
    x = 0.5 * (1 - np.cos(np.linspace(0, np.pi, n_interval)))
    for a, b in intervals:
        if b <= a:
            continue
        pts.append(a + (b - a) * x)
        # A few points just outside, where the emitting mode disappears.
        w = b - a
        pts.append(a - w * np.geomspace(1e-3, 10, 8))
        pts.append(b + w * np.geomspace(1e-3, 10, 8))
    grid = np.unique(np.concatenate(pts))
    grid = grid[(grid >= omega_lo) & (grid <= omega_hi)]
    if edges.size:
        d = np.min(np.abs(grid[:, None] - edges[None, :]) / edges[None, :], axis=1)
        grid = grid[d > guard]
    return grid


def moving_frame_spectrum(step: StepConfig, omegas: Iterable[float], workers: int = 1) -> list:
    """Flux density of every out mode on a frequency grid."""
    return parallel_map(_spectrum_point, [(step, float(w)) for w in omegas], workers)


# -- laboratory frame ---------------------------------------------------------


def lab_flux(phi_mf: float, v_g_lab: float, u: float) -> float:
    """Lab flux density |1 - u / v_g| phi, with v_g the lab group velocity."""
    if v_g_lab == 0:
        raise ZeroGroupVelocity("lab group velocity vanishes", u=u)
    return abs(1.0 - u / v_g_lab) * phi_mf


@dataclass(frozen=True)
class LabContribution:
    label: str
    omega_mf: float
    Omega: float
    K: float
    v_g_lab: float
    phi: float
    Phi: float


@dataclass
class LabSpectrumPoint:
    wavelength: float
    Phi_lambda: float
    contributions: list = field(default_factory=list)

    def by_mode(self) -> dict:
        out = {}
        for cb in self.contributions:
            out[cb.label] = out.get(cb.label, 0.0) + 2 * np.pi * c / self.wavelength**2 * cb.Phi
        return out


def lab_contributions(step: StepConfig, Omega0: float):
    """Out-mode kinematics reaching a lab detector at angular frequency ``Omega0``.

    For each side the forward optical wave (Omega0, +n Omega0/c) and its
    negative-frequency image (-Omega0, -n Omega0/c) are boosted to the
    comoving frame; those with omega > 0 whose comoving group velocity points
    away from the front are kept.  Returns tuples
    (side, omega, k, Omega, K, v_g_lab) with v_g_lab = c / n_g > 0.
    """
    u = step.u
    g = lorentz_gamma(u)
    out = []
    for side in "LR":
        med = step.medium(side)
        n = float(refractive_index(med, Omega0))
        if not np.isfinite(n):
            continue
        ng = float(group_index(med, Omega0))
        v_lab = c / ng
        v_mf = (v_lab - u) / (1 - u * v_lab / c**2)
        escaping = v_mf < 0 if side == "L" else v_mf > 0
        if not escaping:
            continue
        for sign in (1, -1):
            Omega = sign * Omega0
            K = sign * n * Omega0 / c
            omega = g * (Omega - u * K)
            if omega <= 0:
                continue
            k = g * (K - u * Omega / c**2)
            out.append((side, omega, k, Omega, K, v_lab))
    return out


def _identify(step, side, omega, k):
    modes = solve_modes(step.medium(side), step.u, omega, side)
    best = min(modes, key=lambda m: abs(m.k - k))
    if abs(best.k - k) > 1e-6 * abs(k):
        raise ComputeError("lab branch does not match a comoving root", omega=omega, k=k)
    return best


def lab_point(step: StepConfig, wavelength: float, cache: Optional[dict] = None) -> LabSpectrumPoint:
    """Lab spectral density per unit wavelength at one detector wavelength.

    Raises NoContribution when no out mode reaches the detector.
    """
    Omega0 = 2 * np.pi * c / wavelength
    contribs = []
    for side, omega, k, Omega, K, v_lab in lab_contributions(step, Omega0):
        try:
            mode = _identify(step, side, omega, k)
            if cache is not None and omega in cache:
                res = cache[omega]
            else:
                # Near a velocity match omega is stationary in the wavelength,
                # so a whole band of detector wavelengths sits within the
                # boundary guard of an interval edge; the solve is still valid
                # there unless the mode basis itself degenerates.
                res = scatter(step, omega, check_boundaries=False)
                if cache is not None:
                    cache[omega] = res
        except ComputeError:
            continue
        if mode.name not in res.out_order:
            continue
        phi = flux(res, mode.name)
        contribs.append(LabContribution(mode.name, omega, Omega, K, v_lab, phi, lab_flux(phi, v_lab, step.u)))
    if not contribs:
        raise NoContribution("no out mode reaches this wavelength", wavelength=wavelength)
    total = sum(cb.Phi for cb in contribs)
    return LabSpectrumPoint(wavelength, 2 * np.pi * c / wavelength**2 * total, contribs)


def _lab_point_safe(args):
    step, lam = args
    try:
        return lab_point(step, lam)
    except NoContribution:
        return LabSpectrumPoint(lam, 0.0, [])


def lab_spectrum(step: StepConfig, wavelengths: Iterable[float], workers: int = 1, strict: bool = False) -> list:
    """Lab spectral density on a wavelength grid.

    Wavelengths reached by no out mode give zero density, or raise
    NoContribution when ``strict``.
    """
    lams = [float(x) for x in wavelengths]
    if strict:
        return parallel_map(_lab_point_strict, [(step, lam) for lam in lams], workers)
    return parallel_map(_lab_point_safe, [(step, lam) for lam in lams], workers)


def _lab_point_strict(args):
    return lab_point(*args)


def _pixel_edges(grid):
    grid = np.asarray(grid, dtype=float)
    mid = 0.5 * (grid[1:] + grid[:-1])
    first = grid[0] - (mid[0] - grid[0]) if len(grid) > 1 else grid[0] * (1 - 1e-3)
    last = grid[-1] + (grid[-1] - mid[-1]) if len(grid) > 1 else grid[0] * (1 + 1e-3)
    return np.concatenate([[first], mid, [last]])


def _pixel_contributions(step, lam_lo, lam_hi):
    """Comoving-frequency intervals covered by one wavelength pixel, per out mode."""
    a = {(s, int(np.sign(O))): (w, k) for s, w, k, O, K, v in lab_contributions(step, 2 * np.pi * c / lam_lo)}
    b = {(s, int(np.sign(O))): (w, k) for s, w, k, O, K, v in lab_contributions(step, 2 * np.pi * c / lam_hi)}
    mid = lab_contributions(step, 2 * np.pi * c / (0.5 * (lam_lo + lam_hi)))
    out = []
    for s, w, k, O, K, v in mid:
        key = (s, int(np.sign(O)))
        if key not in a or key not in b:
            continue
        lo, hi = sorted((a[key][0], b[key][0]))
        if hi <= lo:
            continue
        try:
            mode = _identify(step, s, w, k)
        except RifError:
            continue
        out.append((mode.name, lo, hi, w))
    return out


def lab_correlation_map(step: StepConfig, lambda_grid_1, lambda_grid_2, cache: Optional[dict] = None) -> np.ndarray:
    """Pearson coefficients between lab detectors on two wavelength grids.

    Each wavelength pixel covers a comoving-frequency interval per
    contributing out mode.  Covariances come from overlapping intervals,
    evaluated at the centre of the overlap; variances of different modes
    sharing a pixel add incoherently.
    """
    cache = {} if cache is None else cache

    def S_at(w):
        if w not in cache:
            cache[w] = scatter(step, w, check_boundaries=False)
        return cache[w]

    def pixels(grid):
        edges = _pixel_edges(grid)
        out = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            contribs = _pixel_contributions(step, lo, hi)
            var = 0.0
            kept = []
            for name, wlo, whi, w in contribs:
                try:
                    res = S_at(w)
                except RifError:
                    continue
                if name not in res.out_order:
                    continue
                n = pair_number(res, name)
                var += (whi - wlo) ** 2 * n * (n + 1)
                kept.append((name, wlo, whi))
            out.append((kept, var))
        return out

    p1 = pixels(lambda_grid_1)
    p2 = p1 if lambda_grid_2 is lambda_grid_1 else pixels(lambda_grid_2)
    C = np.zeros((len(p1), len(p2)))
    for i, (c1, v1) in enumerate(p1):
        for j, (c2, v2) in enumerate(p2):
            if v1 == 0 or v2 == 0:
                continue
            cov = 0.0
            for name1, a1, b1 in c1:
                for name2, a2, b2 in c2:
                    lo, hi = max(a1, a2), min(b1, b2)
                    if hi <= lo:
                        continue
                    try:
                        res = S_at(0.5 * (lo + hi))
                    except RifError:
                        continue
                    if name1 not in res.out_order or name2 not in res.out_order:
                        continue
                    # X is Hermitian-symmetric in magnitude, so the map is symmetric.
                    cov += (hi - lo) ** 2 * _pair_modulus(res, name1, name2) ** 2
            C[i, j] = cov / math.sqrt(v1 * v2)
    return C


# -- horizon emission summary -------------------------------------------------


def _interval_grid(a, b, n, guard=2e-9):
    x = 0.5 * (1 - np.cos(np.linspace(0, np.pi, n)))
    w = a + (b - a) * x
    pad = guard * b
    return w[(w > a + pad) & (w < b - pad)]


def _horizon_summary(step, interval, partner, n):
    best = {"noL": (-1.0, None), partner: (-1.0, None)}
    C_max = 0.0
    for w in _interval_grid(*interval, n):
        res = scatter(step, w, check_boundaries=False)
        if partner not in res.out_order or "noL" not in res.out_order:
            continue
        C_max = max(C_max, pearson(res, "noL", partner))
        for name in ("noL", partner):
            lm = next(m for m in res.left_modes + res.right_modes if m.mode.name == name)
            mode = lm.mode
            lam = 2 * np.pi * c / abs(mode.Omega.real)
            v_lab = lab_group_velocity(mode.group_velocity_mf, step.u)
            Phi = lab_flux(flux(res, name), v_lab, step.u)
            Phi_lam = 2 * np.pi * c / lam**2 * Phi
            if Phi_lam > best[name][0]:
                best[name] = (Phi_lam, lam)
    return {
        "lambda_noL": best["noL"][1],
        f"lambda_{partner}": best[partner][1],
        "Phi_noL": best["noL"][0],
        f"Phi_{partner}": best[partner][0],
        "C": C_max,
    }


def table1_row(step: StepConfig, n_points: int = 301) -> dict:
    """Wavelengths, peak lab spectral densities and correlations at both horizons.

    For the white-hole interval the partner of noL is loL; for the black-hole
    interval it is moR.  Wavelengths and densities are taken at the maximum
    of each mode's lab spectral density inside the interval, and C is the
    largest narrowband Pearson coefficient (Delta^2 = Delta1 Delta2).
    """
    hi = horizon_intervals(step)
    return {
        "u_over_c": step.u / c,
        "delta_n": step.delta_n,
        "white_hole": _horizon_summary(step, hi.whi, "loL", n_points),
        "black_hole": _horizon_summary(step, hi.bhi, "moR", n_points),
    }
