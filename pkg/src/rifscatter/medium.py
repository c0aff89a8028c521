"""
Homogeneous dielectric regions, the moving index step, and Lorentz boosts.

A region is described by a three-resonance Sellmeier (Hopfield) model:

    n^2(W) = 1 + sum_i 4 pi kappa_i W_i^2 / (W_i^2 - W^2)

with ``W`` the laboratory angular frequency.  The high-index region behind
the front is obtained from the low-index one by scaling every elastic
constant by ``mu`` and every squared resonance by ``1/mu``.

All quantities are SI: rad/s, rad/m, m/s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.constants import c
from scipy.optimize import brentq

from .errors import ConfigError

__all__ = [
    "MediumSpec",
    "StepConfig",
    "FrameEvent",
    "FUSED_SILICA",
    "fused_silica",
    "left_medium",
    "lorentz_to_lab",
    "lab_to_moving",
    "lorentz_gamma",
    "n_squared",
    "refractive_index",
    "group_index",
    "velocity_from_center_wavelength",
    "mu_linear",
    "mu_exact",
    "parse_velocity",
]


@dataclass(frozen=True)
class MediumSpec:
    """Three (kappa, resonance) pairs, sorted by resonance frequency."""

    resonances: tuple[tuple[float, float], ...]

    def __post_init__(self):
        res = tuple((float(k), float(w)) for k, w in self.resonances)
        if len(res) != 3:
            raise ConfigError(f"exactly 3 resonances required, got {len(res)}")
        for kappa, omega in res:
            if not (kappa > 0 and omega > 0):
                raise ConfigError(f"resonance ({kappa}, {omega}) must be positive")
        if any(res[i][1] >= res[i + 1][1] for i in range(2)):
            raise ConfigError("resonances must be sorted ascending by frequency")
        object.__setattr__(self, "resonances", res)

    @property
    def kappas(self) -> np.ndarray:
        return np.array([r[0] for r in self.resonances])

    @property
    def omegas(self) -> np.ndarray:
        return np.array([r[1] for r in self.resonances])

    def scaled(self, mu: float) -> "MediumSpec":
        """Return the medium with kappa -> mu kappa and W^2 -> W^2 / mu."""
        return MediumSpec(tuple((mu * k, w / math.sqrt(mu)) for k, w in self.resonances))


# Malitson fused silica written as elastic constants and resonances (rad/s).
FUSED_SILICA = MediumSpec(
    ((0.07142, 190.341e12), (0.03246, 16.2047e15), (0.05540, 27.537e15))
)


def fused_silica() -> MediumSpec:
    return FUSED_SILICA


def lorentz_gamma(u: float) -> float:
    if not abs(u) < c:
        raise ConfigError(f"|u| must be below c, got u={u}")
    return 1.0 / math.sqrt(1.0 - (u / c) ** 2)


def n_squared(medium: MediumSpec, Omega):
    """Squared laboratory refractive index at lab angular frequency ``Omega``."""
    Omega = np.asarray(Omega, dtype=float)
    w2 = medium.omegas**2
    terms = 4 * np.pi * medium.kappas * w2 / (w2 - Omega[..., None] ** 2)
    return 1.0 + terms.sum(axis=-1)


def refractive_index(medium: MediumSpec, Omega):
    """Phase index n(Omega); NaN inside stop bands where n^2 < 0."""
    n2 = n_squared(medium, Omega)
    return np.sqrt(np.where(n2 > 0, n2, np.nan))


def group_index(medium: MediumSpec, Omega):
    """Laboratory group index d(n Omega)/d Omega."""
    Omega = np.asarray(Omega, dtype=float)
    w2 = medium.omegas**2
    dn2 = (8 * np.pi * medium.kappas * w2 * Omega[..., None] / (w2 - Omega[..., None] ** 2) ** 2).sum(axis=-1)
    n = refractive_index(medium, Omega)
    return n + Omega * dn2 / (2 * n)


def velocity_from_center_wavelength(medium: MediumSpec, wavelength: float) -> float:
    """Front speed equal to the lab group velocity of light at ``wavelength``."""
    return c / float(group_index(medium, 2 * np.pi * c / wavelength))


def mu_linear(n_ref: float, delta_n: float) -> float:
    return 1.0 + 2.0 * delta_n / (n_ref - 1.0 / n_ref)


def mu_exact(medium: MediumSpec, delta_n: float, reference_wavelength: float) -> float:
    """Scale factor whose scaled medium raises the index by exactly ``delta_n``.

    The index change is evaluated at ``reference_wavelength`` (lab frame).
    """
    if delta_n == 0:
        return 1.0
    Omega = 2 * np.pi * c / reference_wavelength
    n_ref = float(refractive_index(medium, Omega))

    def excess(mu):
        return float(refractive_index(medium.scaled(mu), Omega)) - n_ref - delta_n

    guess = mu_linear(n_ref, delta_n)
    hi = 1.0 + 4.0 * (guess - 1.0)
    while excess(hi) < 0:
        hi = 1.0 + 2.0 * (hi - 1.0)
    return brentq(excess, 1.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True)
class StepConfig:
    """A step of height ``delta_n`` moving at speed ``u`` into ``right_medium``.

    ``reference_wavelength`` pins the frequency at which ``delta_n`` is
    measured; ``mu_method`` selects the linearised ("linear") or the
    bisection ("exact") mapping from ``delta_n`` to ``mu``.
    """

    right_medium: MediumSpec
    delta_n: float
    u: float
    reference_wavelength: float = 800e-9
    mu_method: str = "linear"

    def __post_init__(self):
        if not 0 < self.u < c:
            raise ConfigError(f"front speed must satisfy 0 < u < c, got {self.u}")
        if self.delta_n < 0:
            raise ConfigError(f"delta_n must be non-negative, got {self.delta_n}")
        if self.mu_method not in ("linear", "exact"):
            raise ConfigError(f"unknown mu_method {self.mu_method!r}")
        if self.reference_wavelength <= 0:
            raise ConfigError("reference_wavelength must be positive")

    @property
    def gamma(self) -> float:
        return lorentz_gamma(self.u)

    @cached_property
    def n_R(self) -> float:
        return float(refractive_index(self.right_medium, 2 * np.pi * c / self.reference_wavelength))

    @cached_property
    def mu(self) -> float:
        if self.delta_n == 0:
            return 1.0
        if self.mu_method == "exact":
            return mu_exact(self.right_medium, self.delta_n, self.reference_wavelength)
        return mu_linear(self.n_R, self.delta_n)

    @cached_property
    def left_medium(self) -> MediumSpec:
        return self.right_medium.scaled(self.mu)

    def medium(self, side: str) -> MediumSpec:
        if side == "L":
            return self.left_medium
        if side == "R":
            return self.right_medium
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")

    def with_delta_n(self, delta_n: float) -> "StepConfig":
        return StepConfig(self.right_medium, delta_n, self.u, self.reference_wavelength, self.mu_method)


def left_medium(step: StepConfig) -> MediumSpec:
    return step.left_medium


@dataclass(frozen=True)
class FrameEvent:
    omega: float
    k: complex
    Omega: complex
    K: complex

    @classmethod
    def from_moving(cls, omega, k, u):
        Omega, K = lorentz_to_lab(omega, k, u)
        return cls(omega, k, Omega, K)


def lorentz_to_lab(omega, k, u):
    """Moving-frame (omega, k) to lab-frame (Omega, K)."""
    g = lorentz_gamma(u)
    return g * (omega + u * k), g * (k + u * omega / c**2)


def lab_to_moving(Omega, K, u):
    g = lorentz_gamma(u)
    return g * (Omega - u * K), g * (K - u * Omega / c**2)


def parse_velocity(text: str) -> float:
    """Parse ``'2/3c'``, ``'0.6667c'`` or a plain speed in m/s."""
    s = str(text).strip().replace(" ", "")
    try:
        if s.endswith("c"):
            frac = s[:-1] or "1"
            if "/" in frac:
                num, den = frac.split("/")
                return float(num) / float(den) * c
            return float(frac) * c
        return float(s)
    except ValueError as exc:
        raise ConfigError(f"cannot parse velocity {text!r}") from exc
