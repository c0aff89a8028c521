"""
Plane-wave modes of a homogeneous region seen from the frame of the front.

In the comoving frame a region with lab frequency ``s = gamma (omega + u k)``
obeys

    F(omega, k) = c^2 k^2 - omega^2 - sum_i 4 pi kappa_i s^2 / (1 - s^2 / W_i^2) = 0

Clearing the three denominators gives a degree-8 polynomial in ``k``, so
every side carries eight local modes per frequency.  They are labelled by
descending lab frequency as ``u, uo, mo, lo, l, nl, no, nu``; members of a
complex-conjugate pair carry the label ``c`` but keep their slot index.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.constants import c
from scipy.optimize import brentq

from .errors import (
    BoundaryFrequency,
    DegenerateRoot,
    InconsistentScenario,
    LabelAmbiguity,
    NoHorizon,
    NullSpaceDimension,
    ResonanceError,
    ZeroDenominator,
)
from .medium import MediumSpec, StepConfig, group_index, lorentz_gamma, n_squared, refractive_index

__all__ = [
    "SLOT_LABELS",
    "POSITIVE_SLOTS",
    "ModeSolution",
    "KinematicScenario",
    "HorizonIntervals",
    "LocalModeVector",
    "dispersion_residual",
    "dispersion_roots",
    "group_velocity",
    "lab_group_velocity",
    "solve_modes",
    "label_modes",
    "optical_branch_extrema",
    "horizon_intervals",
    "classify_scenario",
    "build_local_mode",
    "field_transform",
]

SLOT_LABELS = ("u", "uo", "mo", "lo", "l", "nl", "no", "nu")
POSITIVE_SLOTS = frozenset(range(5))

# Internal frequency scale for the polynomial; keeps coefficients O(1).
_OMEGA_SCALE = 1.0e15
# Roots with |Im k| below REAL_REL |Re k| + REAL_ABS are taken as real.
REAL_REL = 1e-9
REAL_ABS = 1e-3
DEGENERATE_REL = 1e-8
RESONANCE_GUARD = 1e-6
ZERO_VG_REL = 1e-9


# -- dispersion ---------------------------------------------------------------


def _susceptibility_terms(medium, s):
    """Return G(s) = sum 4 pi kappa s^2/D and G'(s), with D = 1 - s^2/W^2."""
    s = np.asarray(s)
    kap = medium.kappas
    D = 1.0 - s[..., None] ** 2 / medium.omegas**2
    G = (4 * np.pi * kap * s[..., None] ** 2 / D).sum(axis=-1)
    dG = (8 * np.pi * kap * s[..., None] / D**2).sum(axis=-1)
    return G, dG


def _F_and_derivs(medium, u, omega, k):
    g = lorentz_gamma(u)
    s = g * (omega + u * k)
    G, dG = _susceptibility_terms(medium, s)
    F = c**2 * k**2 - omega**2 - G
    F_k = 2 * c**2 * k - g * u * dG
    F_w = -2 * omega - g * dG
    scale = np.abs(c**2 * k**2) + omega**2 + np.abs(G)
    return F, F_k, F_w, scale


def dispersion_residual(medium: MediumSpec, u: float, omega: float, k) -> np.ndarray:
    """Relative residual |F| / (|c k|^2 + omega^2 + |G|) of the dispersion relation."""
    F, _, _, scale = _F_and_derivs(medium, u, omega, np.asarray(k, dtype=complex))
    return np.abs(F) / scale


def _polynomial(medium, u, omega):
    """Coefficients (ascending) of the cleared dispersion polynomial in q = c k / w_s."""
    beta = u / c
    g = lorentz_gamma(u)
    w = omega / _OMEGA_SCALE
    O = medium.omegas / _OMEGA_SCALE
    s = np.array([g * w, g * beta])
    s2 = P.polymul(s, s)
    denoms = [P.polysub([Oi * Oi], s2) for Oi in O]
    total = P.polymul([-w * w, 0.0, 1.0], P.polymul(denoms[0], P.polymul(denoms[1], denoms[2])))
    for i, (kap, Oi) in enumerate(zip(medium.kappas, O)):
        term = 4 * np.pi * kap * Oi * Oi * s2
        for j in range(3):
            if j != i:
                term = P.polymul(term, denoms[j])
        total = P.polysub(total, term)
    return total


def _newton_polish(medium, u, omega, k, iters=30):
    for _ in range(iters):
        F, F_k, _, _ = _F_and_derivs(medium, u, omega, k)
        if F_k == 0:
            break
        step = F / F_k
        k = k - step
        if abs(step) <= 4e-16 * abs(k):
            break
    return k


def _polish_real_extended(medium, u, omega, k, iters=8):
    """Newton steps on the real axis in extended precision.

    Near a branch extremum two real roots almost coincide and F_k is small,
    so the rounding error of F in double precision limits the root and,
    through F_k, the mode normalization.  Evaluating F in long double
    removes that floor wherever the platform provides it.
    """
    ld = np.longdouble
    cc = ld(c)
    uu = ld(u)
    g = 1 / np.sqrt(1 - (uu / cc) ** 2)
    w = ld(omega)
    kap = medium.kappas.astype(ld)
    W2 = medium.omegas.astype(ld) ** 2
    kk = ld(k)
    for _ in range(iters):
        s = g * (w + uu * kk)
        D = 1 - s * s / W2
        G = np.sum(4 * np.pi * kap * s * s / D)
        dG = np.sum(8 * np.pi * kap * s / D**2)
        F = cc * cc * kk * kk - w * w - G
        F_k = 2 * cc * cc * kk - g * uu * dG
        if F_k == 0:
            break
        step = F / F_k
        kk = kk - step
        if abs(step) <= 1e-19 * abs(kk):
            break
    return float(kk)


def dispersion_roots(medium: MediumSpec, u: float, omega: float) -> np.ndarray:
    """All eight wavenumbers solving the comoving dispersion relation at ``omega``.

    Roots come from the companion matrix of the cleared polynomial and are
    then Newton-polished on the rational form.  Near-real roots are snapped
    onto the real axis and complex roots are returned as exact conjugate
    pairs.  The result is sorted by descending real part (equivalently by
    descending lab frequency), conjugate pairs with the Im k > 0 member first.

    Raises
    ------
    DegenerateRoot
        If two roots coincide, which happens at a branch extremum.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    coeffs = _polynomial(medium, u, omega)
    raw = P.polyroots(coeffs) * _OMEGA_SCALE / c
    roots = np.array([_newton_polish(medium, u, omega, complex(k)) for k in raw])

    is_real = np.abs(roots.imag) < REAL_REL * np.abs(roots.real) + REAL_ABS
    real = [
        complex(_polish_real_extended(medium, u, omega, _newton_polish(medium, u, omega, complex(k.real)).real))
        for k in roots[is_real]
    ]
    upper = [k for k in roots[~is_real] if k.imag > 0]
    lower = [k for k in roots[~is_real] if k.imag < 0]
    if len(upper) != len(lower):
        raise DegenerateRoot("complex roots do not pair up", omega=omega)
    # Symmetrize each pair; the polynomial has real coefficients.
    paired = []
    for k in upper:
        j = int(np.argmin([abs(k - q.conjugate()) for q in lower]))
        kk = 0.5 * (k + lower.pop(j).conjugate())
        paired += [kk, kk.conjugate()]
    out = np.array(real + paired, dtype=complex)
    order = np.lexsort((-out.imag, -out.real))
    out = out[order]

    for i in range(8):
        for j in range(i + 1, 8):
            if abs(out[i] - out[j]) < DEGENERATE_REL * max(abs(out[i]), abs(out[j])):
                raise DegenerateRoot("coincident dispersion roots", omega=omega, k=out[i])
    return out


def group_velocity(medium: MediumSpec, u: float, omega: float, k: float, tol: float = ZERO_VG_REL) -> float:
    """Comoving group velocity d omega / d k by implicit differentiation.

    Raises ZeroDenominator when d F / d k cancels to within ``tol`` of its
    largest term, i.e. at a branch extremum.  Pass ``tol=0`` to get the raw
    value regardless.
    """
    k = float(np.real(k))
    g = lorentz_gamma(u)
    s = g * (omega + u * k)
    _, dG = _susceptibility_terms(medium, s)
    num = 2 * c**2 * k - g * u * dG
    den = 2 * omega + g * dG
    if abs(num) <= tol * max(abs(2 * c**2 * k), abs(g * u * dG)):
        raise ZeroDenominator("group velocity vanishes at a branch extremum", omega=omega, k=k)
    if den == 0:
        raise ZeroDenominator("dF/domega vanishes", omega=omega, k=k)
    return float(num / den)


def lab_group_velocity(v_mf: float, u: float) -> float:
    """Relativistic velocity addition from the comoving to the lab frame."""
    return (v_mf + u) / (1 + u * v_mf / c**2)


# -- mode labelling -----------------------------------------------------------


@dataclass(frozen=True)
class ModeSolution:
    """One local mode at fixed comoving frequency.

    ``norm_sign`` is +1 or -1 for propagating modes and 0 for evanescent
    ones (whose normalization is bookkeeping only).  ``slot`` is the index
    into ``SLOT_LABELS`` obtained by sorting on descending lab frequency.
    """

    k: complex
    omega: float
    Omega: complex
    K: complex
    group_velocity_mf: Optional[float]
    norm_sign: int
    side: str
    label: str
    slot: int

    @property
    def propagating(self) -> bool:
        return self.group_velocity_mf is not None

    @property
    def name(self) -> str:
        return f"{self.label}{self.side}"

    @property
    def decaying(self) -> bool:
        """Evanescent mode that decays away from the front on its side."""
        if self.propagating:
            return False
        return (self.k.imag > 0) == (self.side == "R")

    @property
    def growing(self) -> bool:
        return not self.propagating and not self.decaying

    @property
    def incoming(self) -> bool:
        """Propagating mode whose energy flows toward the front."""
        if not self.propagating:
            return False
        v = self.group_velocity_mf
        return v > 0 if self.side == "L" else v < 0

    @property
    def outgoing(self) -> bool:
        return self.propagating and not self.incoming


def label_modes(solutions, rel_tol: float = 1e-10):
    """Assign slot labels by descending Re Omega.

    ``solutions`` is a sequence of eight ModeSolution-like objects (only
    ``Omega``, ``k`` and ``group_velocity_mf`` are read).  Returns new
    ModeSolution objects sorted into slot order.
    """
    sols = list(solutions)
    if len(sols) != 8:
        raise ValueError(f"expected 8 solutions, got {len(sols)}")
    order = sorted(range(8), key=lambda i: (-np.real(sols[i].Omega), -np.imag(sols[i].k)))
    ranked = [sols[i] for i in order]
    prop = [m for m in ranked if m.group_velocity_mf is not None]
    for a, b in zip(prop, prop[1:]):
        if abs(np.real(a.Omega) - np.real(b.Omega)) <= rel_tol * max(abs(a.Omega), abs(b.Omega)):
            raise LabelAmbiguity("two propagating modes share a lab frequency", Omega=np.real(a.Omega))
    out = []
    for slot, m in enumerate(ranked):
        label = SLOT_LABELS[slot] if m.group_velocity_mf is not None else "c"
        out.append(
            ModeSolution(m.k, m.omega, m.Omega, m.K, m.group_velocity_mf, m.norm_sign, m.side, label, slot)
        )
    return out


def solve_modes(medium: MediumSpec, u: float, omega: float, side: str = "R"):
    """Solve, classify and label the eight local modes of one side."""
    g = lorentz_gamma(u)
    sols = []
    for k in dispersion_roots(medium, u, omega):
        Omega = g * (omega + u * k)
        K = g * (k + u * omega / c**2)
        if k.imag == 0:
            vg = group_velocity(medium, u, omega, k.real)
            sign = 1 if Omega.real > 0 else -1
            sols.append(ModeSolution(complex(k.real), omega, complex(Omega.real), complex(K.real), vg, sign, side, "", -1))
        else:
            sols.append(ModeSolution(k, omega, Omega, K, None, 0, side, "", -1))
    return label_modes(sols)


# -- horizons and scenarios ---------------------------------------------------


def _transparency_window(medium):
    """Lab-frequency window between the IR and UV resonances where n^2 > 0."""
    W1, W2 = medium.omegas[0], medium.omegas[1]
    lo = brentq(lambda W: float(n_squared(medium, W)), W1 * (1 + 1e-12), 0.5 * (W1 + W2), xtol=1e-3)
    while float(n_squared(medium, lo)) <= 0:
        lo *= 1 + 1e-12
    return lo, W2


def optical_branch_extrema(medium: MediumSpec, u: float):
    """Comoving frequencies and lab frequencies at the two group-velocity matches.

    On the forward optical branch omega(W) = gamma W (1 - u n(W)/c), whose
    derivative gamma (1 - u n_g/c) vanishes where the lab group index equals
    c/u.  The infrared match is the branch minimum and the ultraviolet match
    the maximum.

    Returns
    -------
    dict with ``omega_min``, ``omega_max``, ``Omega_min``, ``Omega_max``.
    """
    return dict(_branch_extrema(medium, float(u)))


@lru_cache(maxsize=256)
def _branch_extrema(medium, u):
    g = lorentz_gamma(u)
    lo, hi = _transparency_window(medium)
    target = c / u

    def excess(W):
        return float(group_index(medium, W)) - target

    grid = np.geomspace(lo * (1 + 1e-9), hi * (1 - 1e-9), 4001)
    vals = np.array([excess(W) for W in grid])
    i_min = int(np.argmin(vals))
    if vals[i_min] >= 0:
        raise NoHorizon("front is faster than every group velocity of the optical branch", u=u)
    W_ir = brentq(excess, grid[0], grid[i_min], xtol=1e-6, rtol=8.9e-16)
    W_uv = brentq(excess, grid[i_min], grid[-1], xtol=1e-6, rtol=8.9e-16)

    def omega_of(W):
        return g * W * (1 - u * float(refractive_index(medium, W)) / c)

    return (("omega_min", omega_of(W_ir)), ("omega_max", omega_of(W_uv)), ("Omega_min", W_ir), ("Omega_max", W_uv))


@dataclass(frozen=True)
class HorizonIntervals:
    """White-hole and black-hole intervals plus the per-side subluminal intervals."""

    whi: tuple
    bhi: tuple
    sbli_L: tuple
    sbli_R: tuple

    @property
    def whi_width(self) -> float:
        return self.whi[1] - self.whi[0]

    @property
    def bhi_width(self) -> float:
        return self.bhi[1] - self.bhi[0]

    @property
    def edges(self) -> tuple:
        return tuple(sorted(self.sbli_L + self.sbli_R))


def horizon_intervals(step: StepConfig) -> HorizonIntervals:
    """Locate the horizon intervals from the optical-branch extrema of each side.

    The white-hole interval is where only the left side is subluminal on the
    low-frequency end, the black-hole interval where only the right side is
    on the high-frequency end.  For overlapping subluminal intervals these
    are (omega_minL, omega_minR) and (omega_maxL, omega_maxR); when the
    intervals are disjoint each one is a horizon interval in full.

    Raises NoHorizon if either side has no subluminal interval, so that one
    of the two horizon intervals has disappeared.
    """
    eL = optical_branch_extrema(step.left_medium, step.u)
    eR = optical_branch_extrema(step.right_medium, step.u)
    return HorizonIntervals(
        whi=(eL["omega_min"], min(eR["omega_min"], eL["omega_max"])),
        bhi=(max(eL["omega_max"], eR["omega_min"]), eR["omega_max"]),
        sbli_L=(eL["omega_min"], eL["omega_max"]),
        sbli_R=(eR["omega_min"], eR["omega_max"]),
    )


@dataclass(frozen=True)
class KinematicScenario:
    """Scenario letter a-e and the number of propagating modes per side."""

    case: str
    counts: tuple

    DESCRIPTIONS = {
        "a": "horizonless, light moves left",
        "b": "white hole",
        "c": "horizonless, two-way",
        "d": "black hole",
        "e": "horizonless, high frequency",
    }

    @property
    def description(self) -> str:
        return self.DESCRIPTIONS[self.case]


def _pair_position(modes):
    """'below' if the evanescent pair sits in the mo/lo slots, 'above' for uo/mo."""
    slots = sorted(m.slot for m in modes if not m.propagating)
    if slots == [2, 3]:
        return "below"
    if slots == [1, 2]:
        return "above"
    return "other"


def scenario_from_modes(left, right) -> KinematicScenario:
    nL = sum(m.propagating for m in left)
    nR = sum(m.propagating for m in right)
    counts = (nL, nR)
    if counts == (8, 8):
        case = "c"
    elif counts == (8, 6):
        case = "b"
    elif counts == (6, 8):
        case = "d"
    elif counts == (6, 6):
        # Below or above both subluminal intervals.  When a large step pushes
        # the left interval entirely below the right one, the gap between
        # them is classified by the right side.
        pR = _pair_position(right)
        if pR == "below":
            case = "a"
        elif pR == "above":
            case = "e"
        else:
            raise InconsistentScenario("unexpected evanescent slots", slots_R=pR)
    else:
        raise InconsistentScenario("unexpected propagating-mode census", counts=counts)
    return KinematicScenario(case, counts)


def classify_scenario(step: StepConfig, omega: float, rel_guard: float = 1e-9) -> KinematicScenario:
    """Kinematic scenario at comoving frequency ``omega``.

    Raises BoundaryFrequency within ``rel_guard`` of any subluminal-interval
    edge on either side.
    """
    for side in "LR":
        try:
            e = optical_branch_extrema(step.medium(side), step.u)
        except NoHorizon:
            continue
        for edge in (e["omega_min"], e["omega_max"]):
            if abs(omega - edge) <= rel_guard * edge:
                raise BoundaryFrequency("frequency at a subluminal-interval edge", omega=omega, edge=edge)
    left = solve_modes(step.left_medium, step.u, omega, "L")
    right = solve_modes(step.right_medium, step.u, omega, "R")
    return scenario_from_modes(left, right)


# -- field vectors ------------------------------------------------------------


def field_transform(medium: MediumSpec, u: float, omega: float) -> np.ndarray:
    """Matrix U mapping W = (A, P, A', P') to V = (A, P, Pi_A, Pi_P).

    Pi_A = -i omega A / (4 pi c^2) and
    Pi_Pi = gamma A / c - i omega gamma^2 P_i / (kappa_i W_i^2) - u gamma^2 P_i' / (kappa_i W_i^2).
    """
    g = lorentz_gamma(u)
    U = np.zeros((8, 8), dtype=complex)
    U[:4, :4] = np.eye(4)
    U[4, 0] = -1j * omega / (4 * np.pi * c**2)
    for i, (kap, W) in enumerate(zip(medium.kappas, medium.omegas)):
        U[5 + i, 0] = g / c
        U[5 + i, 1 + i] = -1j * omega * g**2 / (kap * W**2)
        U[5 + i, 5 + i] = -u * g**2 / (kap * W**2)
    return U


_J = np.block([[np.zeros((4, 4)), np.eye(4)], [-np.eye(4), np.zeros((4, 4))]])


@dataclass(frozen=True)
class LocalModeVector:
    """Field column of one local mode at x = 0.

    ``kg_norm_density`` is i V^dagger J V (hbar = 1).  Propagating modes are
    scaled so that kg_norm_density * 2 pi |v_g| = sgn(Omega); evanescent
    modes have unit Euclidean norm of W.
    """

    W: np.ndarray
    V: np.ndarray
    mode: ModeSolution
    kg_norm_density: float

    @property
    def flux_normalization(self) -> Optional[float]:
        if not self.mode.propagating:
            return None
        return self.kg_norm_density * 2 * np.pi * abs(self.mode.group_velocity_mf)


def _equilibrate(M):
    M = M / np.abs(M).max(axis=1, keepdims=True)
    colscale = np.abs(M).max(axis=0)
    return M / colscale, colscale


def build_local_mode(medium: MediumSpec, u: float, omega: float, k, mode: Optional[ModeSolution] = None) -> LocalModeVector:
    """Construct and normalize the field vector of the local mode (omega, k).

    The amplitudes (A, P_1, P_2, P_3) span the null space of the
    frequency-domain equations of motion

        (c^2 k^2 - omega^2) A + 4 pi i c s sum_i P_i = 0
        (1 - s^2/W_i^2) P_i - i kappa_i s A / c = 0,

    and the spatial derivatives follow as i k times each amplitude.
    """
    k = complex(k)
    g = lorentz_gamma(u)
    s = g * (omega + u * k)
    for W in medium.omegas:
        if min(abs(s - W), abs(s + W)) < RESONANCE_GUARD * W:
            raise ResonanceError("lab frequency inside a resonance guard band", omega=omega, k=k, resonance=W)
    if mode is None:
        K = g * (k + u * omega / c**2)
        if k.imag == 0:
            vg = group_velocity(medium, u, omega, k.real)
            mode = ModeSolution(k, omega, s, K, vg, 1 if s.real > 0 else -1, "R", "", -1)
        else:
            mode = ModeSolution(k, omega, s, K, None, 0, "R", "c", -1)

    M = np.zeros((4, 4), dtype=complex)
    M[0, 0] = c**2 * k**2 - omega**2
    M[0, 1:] = 4j * np.pi * c * s
    for i, (kap, W) in enumerate(zip(medium.kappas, medium.omegas)):
        M[1 + i, 0] = -1j * kap * s / c
        M[1 + i, 1 + i] = 1 - s**2 / W**2
    Me, colscale = _equilibrate(M)
    _, sv, vh = np.linalg.svd(Me)
    if not (sv[-1] < 1e-8 * sv[0] and sv[-2] > 1e-6 * sv[0]):
        raise NullSpaceDimension("on-shell null space is not one-dimensional", omega=omega, k=k, singular_values=sv)
    amp = vh[-1].conj() / colscale
    amp = amp / amp[0] * abs(amp[0])

    W_vec = np.concatenate([amp, 1j * k * amp])
    if mode.propagating:
        F_k = 2 * c**2 * k.real - g * u * _susceptibility_terms(medium, s.real)[1]
        target = c * np.sqrt(2.0 / abs(F_k))
        W_vec = W_vec * (target / abs(amp[0]))
    else:
        W_vec = W_vec / np.linalg.norm(W_vec)
    V = field_transform(medium, u, omega) @ W_vec
    rho = float(np.real(1j * V.conj() @ _J @ V))
    return LocalModeVector(W_vec, V, mode, rho)
