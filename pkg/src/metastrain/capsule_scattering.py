"""Scattering by a circular capsule carrying the effective interface condition.

The particle layer is replaced by the transmission condition on the circle
of radius r:

    d(u)/dnu continuous,        u|+ - u|- = -beta * d(u)/dnu,

with beta = 2 * delta_phys * alpha2_plus (a complex length).  The problem
separates in cylindrical modes: interior regular waves J_n, exterior incident
plane wave plus outgoing waves.  Fields carry exp(+i*omega*t), so outgoing
means Hankel functions of the second kind; per mode the 2x2 system has the
closed-form solution

    b_n = c_n * beta*k * J_n'^2 / (W - beta*k * J_n' H_n'),   W = -2i/(pi k r),

using the Wronskian J_n(z) H_n'(z) - J_n'(z) H_n(z) = W, and c_n = i^n
exp(-i n theta_inc) from the Jacobi-Anger expansion of the incident wave.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import h2vp, hankel2, jv, jvp

from .dispersion import MaterialParams, contrast_values, omega_from_wavelength
from .errors import QuadratureFailure
from .spectral import SpectralDecomposition, alpha2_plus_batch


@dataclass(frozen=True)
class IncidentWave:
    """Unit-amplitude plane wave exp(i k kappa.x)."""

    direction: tuple[float, float]
    wavenumber: float

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        if abs(np.hypot(d[0], d[1]) - 1.0) > 1e-12:
            raise ValueError("incidence direction must be a unit vector")
        if not self.wavenumber > 0.0:
            raise ValueError("wavenumber must be positive")
        object.__setattr__(self, "direction", (float(d[0]), float(d[1])))

    @property
    def angle(self) -> float:
        return float(np.arctan2(self.direction[1], self.direction[0]))


@dataclass(frozen=True)
class ModalScatteringSolution:
    """Cylindrical-mode coefficients of the interface-scattering solution."""

    radius: float
    beta: complex
    wave: IncidentWave
    orders: np.ndarray            # n = -N ... N
    incident_coeffs: np.ndarray   # c_n
    interior_coeffs: np.ndarray   # a_n
    scattered_coeffs: np.ndarray  # b_n

    @property
    def n_modes(self) -> int:
        """Truncation order N (orders run from -N to N)."""
        return int(self.orders[-1])


def solve_modal(radius: float, wave: IncidentWave, beta: complex,
                n_modes: int | None = None) -> ModalScatteringSolution:
    """Solve the per-mode 2x2 systems for the interface condition.

    ``n_modes`` defaults to ceil(k r) + 16, and must be at least k r + 8 when
    given explicitly so the truncated coefficients are negligible.
    """
    k = wave.wavenumber
    z = k * radius
    if not z > 0.0:
        raise ValueError("k * r must be positive")
    if n_modes is None:
        n_modes = int(np.ceil(z)) + 16
    elif n_modes < z + 8:
        raise ValueError(f"n_modes must be at least k*r + 8 = {z + 8:.1f}")

    n = np.arange(-n_modes, n_modes + 1)
    c = np.exp(1j * n * (np.pi / 2.0 - wave.angle))
    J = jv(n, z)
    Jp = jvp(n, z)
    H = hankel2(n, z)
    Hp = h2vp(n, z)

    wronskian = -2j / (np.pi * z)
    denom = wronskian - beta * k * Jp * Hp
    bad = np.abs(denom) < 1e-14 * (np.abs(wronskian) + np.abs(beta * k * Jp * Hp))
    if np.any(bad):
        raise QuadratureFailure(
            f"singular mode systems at orders {n[bad].tolist()} for beta = {beta}"
        )
    b = c * (beta * k) * Jp**2 / denom

    # interior coefficients from whichever condition has the larger pivot
    with np.errstate(divide="ignore", invalid="ignore"):
        via_derivative = (c * Jp + b * Hp) / Jp
        via_jump = (c * J + b * H) / (J - beta * k * Jp)
    use_derivative = np.abs(Jp) >= 0.1 * (np.abs(J) + np.abs(Jp))
    a = np.where(use_derivative, via_derivative, via_jump)

    return ModalScatteringSolution(radius=radius, beta=complex(beta), wave=wave,
                                   orders=n, incident_coeffs=c,
                                   interior_coeffs=a, scattered_coeffs=b)


def field(solution: ModalScatteringSolution, x) -> complex:
    """Total field at a point: modal sums inside, plane wave plus scattered sum outside."""
    x = np.asarray(x, dtype=float)
    k = solution.wave.wavenumber
    rho = float(np.hypot(x[0], x[1]))
    theta = float(np.arctan2(x[1], x[0]))
    n = solution.orders
    phases = np.exp(1j * n * theta)
    if rho < solution.radius:
        return complex(np.sum(solution.interior_coeffs * jv(n, k * rho) * phases))
    incident = np.exp(1j * k * (solution.wave.direction[0] * x[0]
                                + solution.wave.direction[1] * x[1]))
    scattered = np.sum(solution.scattered_coeffs * hankel2(n, k * rho) * phases)
    return complex(incident + scattered)


def cross_sections(solution: ModalScatteringSolution) -> tuple[float, float]:
    """(extinction, scattering) widths from the mode coefficients.

    sigma_sca = (4/k) sum |b_n|^2 and, by the two-dimensional optical theorem,
    sigma_ext = -(4/k) Re sum b_n conj(c_n); they agree when the interface is
    lossless (real beta).
    """
    k = solution.wave.wavenumber
    b = solution.scattered_coeffs
    c = solution.incident_coeffs
    sca = 4.0 / k * float(np.sum(np.abs(b) ** 2))
    ext = -4.0 / k * float(np.real(np.sum(b * np.conj(c))))
    return ext, sca


@dataclass(frozen=True)
class ExtinctionCurve:
    wavelengths: np.ndarray
    extinction: np.ndarray
    scattering: np.ndarray
    radius: float
    delta_phys: float
    material: MaterialParams


def extinction_spectrum(radius: float, material: MaterialParams,
                        decomposition: SpectralDecomposition, delta_phys: float,
                        wavelengths, direction=(1.0, 0.0),
                        beta_override: complex | None = None) -> ExtinctionCurve:
    """Extinction and scattering versus wavelength for the effective capsule.

    The jump coefficient is recomputed per wavelength as 2*delta_phys*alpha2_plus
    unless ``beta_override`` pins it (used for transparency checks).
    """
    lam_grid = np.asarray(wavelengths, dtype=float)
    omega = omega_from_wavelength(lam_grid, material)
    if beta_override is None:
        contrasts = contrast_values(omega, material)
        betas = 2.0 * delta_phys * alpha2_plus_batch(decomposition, contrasts)
    else:
        betas = np.full(lam_grid.shape, complex(beta_override))
    ext = np.empty(lam_grid.size)
    sca = np.empty(lam_grid.size)
    for i, (lam_m, beta) in enumerate(zip(lam_grid, betas)):
        k = 2.0 * np.pi / lam_m
        solution = solve_modal(radius, IncidentWave(direction=direction, wavenumber=k), beta)
        ext[i], sca[i] = cross_sections(solution)
    return ExtinctionCurve(wavelengths=lam_grid, extinction=ext, scattering=sca,
                           radius=radius, delta_phys=delta_phys, material=material)
