"""
Global modes and the scattering matrix at a single comoving frequency.

Continuity of (A, P_i, A', P_i') at the front ties the left and right
local-mode coefficients together through c_L = Amat c_R with
Amat = W_L^{-1} W_R.  An *in* global mode carries one incoming local mode;
every other incoming amplitude and every growing evanescent amplitude is
zero.  *Out* global modes are defined the same way with the roles of the
incoming and outgoing modes swapped.  A growing evanescent mode defines a
separate unphysical global mode that serves as both in and out mode.

Global modes are ordered as: positive-norm modes by slot (left before
right), unphysical modes, then negative-norm modes by slot.  The norm
signature is therefore g = diag(+1, ..., +1, -1, -1, -1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryFrequency, InconsistentScenario, SigmaSingular, SingularBasis
from .medium import StepConfig
from .modes import (
    KinematicScenario,
    LocalModeVector,
    build_local_mode,
    optical_branch_extrema,
    scenario_from_modes,
    solve_modes,
)
from .errors import NoHorizon

__all__ = [
    "MatchMatrix",
    "GlobalMode",
    "ScatteringResult",
    "local_modes",
    "match_matrix",
    "build_global_modes",
    "scattering_matrix",
    "scatter",
]

COND_LIMIT = 1e12
BOUNDARY_GUARD = 1e-9


@dataclass(frozen=True)
class MatchMatrix:
    """Amat = W_L^{-1} W_R in the local-mode normalization, plus a balanced copy.

    ``balanced`` is the same map after every W column has been rescaled to
    unit length (rows equilibrated first); ``scale_L`` and ``scale_R`` hold
    the factors so that Amat = diag(1/scale_L) balanced diag(scale_R).  All
    linear solves use the balanced form.
    """

    A_mat: np.ndarray
    cond_number: float
    balanced: np.ndarray
    scale_L: np.ndarray
    scale_R: np.ndarray


def _stack_W(modes):
    return np.column_stack([m.W for m in modes])


def match_matrix(left_modes, right_modes) -> MatchMatrix:
    """Amat = W_L^{-1} W_R at x = 0, with rows and columns equilibrated for the solve."""
    WL = _stack_W(left_modes)
    WR = _stack_W(right_modes)
    row = np.maximum(np.abs(WL).max(axis=1), np.abs(WR).max(axis=1))
    WL = WL / row[:, None]
    WR = WR / row[:, None]
    nL = np.linalg.norm(WL, axis=0)
    nR = np.linalg.norm(WR, axis=0)
    BL = WL / nL
    BR = WR / nR
    cond = float(np.linalg.cond(BL))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularBasis("left local-mode basis is singular", cond=cond)
    bal = np.linalg.solve(BL, BR)
    return MatchMatrix(bal / nL[:, None] * nR[None, :], cond, bal, nL, nR)


@dataclass(frozen=True)
class GlobalMode:
    """Coefficients of one global mode in the left and right local-mode bases."""

    name: str
    kind: str  # "in", "out" or "unphysical"
    norm: int  # +1, -1, or +1 for unphysical modes
    c_L: np.ndarray
    c_R: np.ndarray
    defining: tuple  # (side, slot) of the defining local mode


def _order_key(gm):
    side, slot = gm.defining
    group = 0 if gm.kind != "unphysical" and gm.norm > 0 else (1 if gm.kind == "unphysical" else 2)
    return (group, slot, side)


def build_global_modes(left_modes, right_modes, scenario: KinematicScenario | None = None, A: MatchMatrix | None = None):
    """Solve the matching conditions for all in, out and unphysical global modes.

    The coefficients returned here refer to the balanced local-mode basis of
    ``A`` (see MatchMatrix); ``scatter`` converts them to the normalized
    local-mode vectors after S has been formed.

    Returns
    -------
    sigma_L_in, sigma_R_in, sigma_L_out, sigma_R_out : ndarray (8, 8)
        Column j holds the local-mode coefficients of global mode j.
    gms_in, gms_out : list of GlobalMode
    """
    if A is None:
        A = match_matrix(left_modes, right_modes)
    Am = A.balanced
    mods = [lm.mode for lm in left_modes] + [lm.mode for lm in right_modes]
    # Unknowns x = (c_L, c_R) with constraint c_L - Amat c_R = 0.
    M = np.hstack([np.eye(8), -Am])
    inc = [i for i, m in enumerate(mods) if m.incoming]
    out = [i for i, m in enumerate(mods) if m.outgoing]
    dec = [i for i, m in enumerate(mods) if m.decaying]
    grow = [i for i, m in enumerate(mods) if m.growing]
    if len(inc) + len(grow) != 8 or len(out) + len(grow) != 8:
        raise InconsistentScenario(
            "flux census does not match the kinematic scenario",
            incoming=len(inc), outgoing=len(out), growing=len(grow),
            scenario=None if scenario is None else scenario.case,
        )

    # Unit amplitude of the defining mode refers to the normalized local
    # mode, which is scale times the balanced basis vector.
    scale = np.concatenate([A.scale_L, A.scale_R])

    def solve(fixed_one, fixed_zero, free):
        if len(free) != 8:
            raise InconsistentScenario("global mode is not uniquely determined", free=len(free))
        x = np.zeros(16, dtype=complex)
        x[fixed_one] = scale[fixed_one]
        x[free] = np.linalg.solve(M[:, free], -M[:, fixed_one] * x[fixed_one])
        return x

    def make(idx, kind, fixed_set, free):
        x = solve(idx, [j for j in fixed_set if j != idx], free)
        m = mods[idx]
        return GlobalMode(m.name, kind, m.norm_sign, x[:8], x[8:], (m.side, m.slot))

    gms_in = [make(i, "in", inc + grow, out + dec) for i in inc]
    gms_out = [make(i, "out", out + grow, inc + dec) for i in out]
    Ainv = None
    for i in grow:
        m = mods[i]
        e = np.zeros(8, dtype=complex)
        e[i % 8] = 1.0
        if m.side == "L":
            if Ainv is None:
                Ainv = np.linalg.inv(Am)
            cL, cR = e, Ainv @ e
        else:
            cL, cR = Am @ e, e
        gm = GlobalMode(f"c{m.side}", "unphysical", 1, cL, cR, (m.side, m.slot))
        gms_in.append(gm)
        gms_out.append(gm)
    gms_in.sort(key=_order_key)
    gms_out.sort(key=_order_key)

    def sig(gms, side):
        return np.column_stack([gm.c_L if side == "L" else gm.c_R for gm in gms])

    return sig(gms_in, "L"), sig(gms_in, "R"), sig(gms_out, "L"), sig(gms_out, "R"), gms_in, gms_out


def _to_mode_basis(gm, A):
    """Re-express balanced-basis coefficients on the local-mode vectors."""
    return GlobalMode(gm.name, gm.kind, gm.norm, gm.c_L / A.scale_L, gm.c_R / A.scale_R, gm.defining)


@dataclass
class ScatteringResult:
    """Scattering data at one comoving frequency.

    ``S[a, b]`` is the amplitude of out mode ``a`` in in mode ``b``, so that
    out-mode annihilators are b = S a.
    """

    omega: float
    scenario: KinematicScenario
    sigma_L_in: np.ndarray
    sigma_R_in: np.ndarray
    sigma_L_out: np.ndarray
    sigma_R_out: np.ndarray
    S: np.ndarray
    g: np.ndarray
    in_order: list
    out_order: list
    quasi_unitarity_residual: float
    lr_consistency: float
    match: MatchMatrix | None = None
    left_modes: list = field(default_factory=list)
    right_modes: list = field(default_factory=list)

    @property
    def mode_order(self):
        return self.out_order

    def out_index(self, name: str) -> int:
        return self.out_order.index(name)

    def in_index(self, name: str) -> int:
        return self.in_order.index(name)

    def row_norms(self) -> np.ndarray:
        """sum_b g_b |S_ab|^2 for every row; equals g_a under quasi-unitarity."""
        return (np.abs(self.S) ** 2 * np.diag(self.g)[None, :]).sum(axis=1)


def scattering_matrix(sigmas, gms_in, gms_out, omega=float("nan"), scenario=None) -> ScatteringResult:
    """S = sigma_L_out^{-1} sigma_L_in, cross-checked against the right side."""
    sLi, sRi, sLo, sRo = sigmas
    for name, s in (("sigma_L_out", sLo), ("sigma_R_out", sRo)):
        cond = np.linalg.cond(s)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SigmaSingular(f"{name} is not invertible", cond=cond, omega=omega)
    S_L = np.linalg.solve(sLo, sLi)
    S_R = np.linalg.solve(sRo, sRi)
    g = np.diag([float(gm.norm) for gm in gms_in])
    g_out = np.diag([float(gm.norm) for gm in gms_out])
    if not np.array_equal(g, g_out):
        raise InconsistentScenario("in and out bases have different norm signatures", omega=omega)
    resid = float(np.abs(S_L.conj().T @ g @ S_L - g).max())
    return ScatteringResult(
        omega=omega,
        scenario=scenario,
        sigma_L_in=sLi,
        sigma_R_in=sRi,
        sigma_L_out=sLo,
        sigma_R_out=sRo,
        S=S_L,
        g=g,
        in_order=[gm.name for gm in gms_in],
        out_order=[gm.name for gm in gms_out],
        quasi_unitarity_residual=resid,
        lr_consistency=float(np.abs(S_L - S_R).max()),
    )


def local_modes(step: StepConfig, omega: float):
    """Normalized local-mode vectors on both sides, in slot order."""
    out = []
    for side in "LR":
        med = step.medium(side)
        sols = solve_modes(med, step.u, omega, side)
        out.append([build_local_mode(med, step.u, omega, m.k, m) for m in sols])
    return out[0], out[1]


def _check_boundaries(step, omega):
    for side in "LR":
        try:
            e = optical_branch_extrema(step.medium(side), step.u)
        except NoHorizon:
            continue
        for edge in (e["omega_min"], e["omega_max"]):
            if abs(omega - edge) <= BOUNDARY_GUARD * edge:
                raise BoundaryFrequency("frequency at an interval edge", omega=omega, edge=edge, side=side)


def scatter(step: StepConfig, omega: float, check_boundaries: bool = True) -> ScatteringResult:
    """Full pipeline at one comoving frequency: modes, matching, S."""
    if check_boundaries:
        _check_boundaries(step, omega)
    left, right = local_modes(step, omega)
    scen = scenario_from_modes([m.mode for m in left], [m.mode for m in right])
    A = match_matrix(left, right)
    *sig, gin, gout = build_global_modes(left, right, scen, A)
    res = scattering_matrix(tuple(sig), gin, gout, omega, scen)
    gin = [_to_mode_basis(gm, A) for gm in gin]
    gout = [_to_mode_basis(gm, A) for gm in gout]
    res.sigma_L_in = np.column_stack([gm.c_L for gm in gin])
    res.sigma_R_in = np.column_stack([gm.c_R for gm in gin])
    res.sigma_L_out = np.column_stack([gm.c_L for gm in gout])
    res.sigma_R_out = np.column_stack([gm.c_R for gm in gout])
    res.match = A
    res.left_modes = left
    res.right_modes = right
    return res
