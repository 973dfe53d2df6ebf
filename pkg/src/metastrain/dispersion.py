"""Drude material model, frequency-dependent contrast and the resonance condition.

Sign convention: the Drude permeability is used exactly as written,
mu_c(omega) = mu0 * (1 - omega_p^2 / (omega^2 + i*omega/T)), which gives the
contrast lam(omega) = (mu_m + mu_c) / (2*(mu_m - mu_c)) a strictly positive
imaginary part for omega > 0 and finite collision time T.  That keeps every
mode sum pole-free; time-harmonic fields carry exp(+i*omega*t) so that
outgoing cylindrical waves are Hankel functions of the second kind.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import epsilon_0 as EPS0
from scipy.constants import mu_0 as MU0

from .errors import ContrastError, OverdampedModeError


@dataclass(frozen=True)
class MaterialParams:
    """Background and particle material constants in SI units.

    ``eps_c`` is carried for completeness but plays no role in the
    quasi-static cell problem; it is surfaced in reports only.
    """

    mu0: float = MU0
    mu_m: float = MU0
    eps0: float = EPS0
    eps_m: float = EPS0
    eps_c: complex | None = None
    omega_p: float = 2.0e15
    collision_time: float = 1.0e-14

    def __post_init__(self):
        if not self.omega_p > 0.0:
            raise ValueError(f"plasma frequency must be positive, got {self.omega_p}")
        if not self.collision_time > 0.0:
            raise ValueError(f"collision time must be positive, got {self.collision_time}")
        if not self.eps_m > 0.0 or not self.mu_m > 0.0:
            raise ValueError("background permittivity and permeability must be positive")

    @classmethod
    def from_relative(cls, mu_m_rel: float = 1.0, eps_m_rel: float = 1.0,
                      omega_p: float = 2.0e15, collision_time: float = 1.0e-14,
                      eps_c_rel: complex | None = None,
                      plasma_frequency_is_angular: bool = True) -> "MaterialParams":
        """Build from relative constants; a non-angular plasma frequency is scaled by 2*pi."""
        wp = omega_p if plasma_frequency_is_angular else 2.0 * np.pi * omega_p
        return cls(
            mu_m=mu_m_rel * MU0,
            eps_m=eps_m_rel * EPS0,
            eps_c=None if eps_c_rel is None else complex(eps_c_rel) * EPS0,
            omega_p=wp,
            collision_time=collision_time,
        )

    @property
    def background_speed(self) -> float:
        """Wave speed in the background medium."""
        return 1.0 / np.sqrt(self.eps_m * self.mu_m)


@dataclass(frozen=True)
class Contrast:
    """Dimensionless permeability contrast lam(omega)."""

    value: complex


def drude_mu(omega, material: MaterialParams):
    """Drude permeability mu0 * (1 - omega_p^2 / (omega^2 + i*omega/T))."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0.0):
        raise ValueError("frequency must be positive")
    gamma = 1.0 / material.collision_time
    val = material.mu0 * (1.0 - material.omega_p**2 / (omega**2 + 1j * omega * gamma))
    return complex(val) if val.ndim == 0 else val


def contrast_values(omega, material: MaterialParams):
    """Vectorised contrast (mu_m + mu_c) / (2*(mu_m - mu_c)) over a frequency grid."""
    mu_c = np.asarray(drude_mu(omega, material))
    diff = material.mu_m - mu_c
    if np.any(diff == 0.0):
        raise ContrastError("mu_m equals mu_c: contrast is infinite")
    return (material.mu_m + mu_c) / (2.0 * diff)


def contrast(omega: float, material: MaterialParams) -> Contrast:
    """Contrast at a single frequency."""
    return Contrast(value=complex(contrast_values(omega, material)))


def contrast_drude_simple(omega, material: MaterialParams):
    """Simplified contrast (omega^2 + i*omega/T)/omega_p^2 - 1/2, valid for mu_m = mu0."""
    omega = np.asarray(omega, dtype=float)
    gamma = 1.0 / material.collision_time
    val = (omega**2 + 1j * omega * gamma) / material.omega_p**2 - 0.5
    return complex(val) if val.ndim == 0 else val


def resonance_frequency(lambda_j: float, material: MaterialParams) -> float:
    """Real part of the frequency solving lambda_j = lam(omega).

    Closed form (Re omega)^2 = (lambda_j + 1/2)*omega_p^2 - 1/(4 T^2); modes
    with a non-positive right-hand side are overdamped and rejected.
    """
    radicand = (lambda_j + 0.5) * material.omega_p**2 - 0.25 / material.collision_time**2
    if radicand <= 0.0:
        raise OverdampedModeError(
            f"mode with eigenvalue {lambda_j} has no real resonance frequency"
        )
    return float(np.sqrt(radicand))


def wavelength(omega, material: MaterialParams):
    """Wavelength 2*pi*c/omega with c the background medium speed."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0.0):
        raise ValueError("frequency must be positive")
    val = 2.0 * np.pi * material.background_speed / omega
    return float(val) if val.ndim == 0 else val


def omega_from_wavelength(lam_m, material: MaterialParams):
    """Inverse of :func:`wavelength`."""
    lam_m = np.asarray(lam_m, dtype=float)
    if np.any(lam_m <= 0.0):
        raise ValueError("wavelength must be positive")
    val = 2.0 * np.pi * material.background_speed / lam_m
    return float(val) if val.ndim == 0 else val
