"""Rotation temperature, Planck energy densities and the thermal energy
density seen by the rotating detector.

Nondimensional values are in units of ``hbar Omega^4 / c^3``.  SI values
take ``omega`` in rad/s.  The divergent zero-point term is never summed.
It is carried as a descriptor only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import integrate

from . import spectral
from ._quadrature import sphere_grid, unit_vectors
from .constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT, STEFAN_BOLTZMANN
from .errors import LightCylinderError, NearLightCylinderError
from .field import polarization_basis
from .kinematics import RotationParams, em_projection_matrix, frenet_serret_tetrad, project_scalar_energy

BETA_CEILING = 0.999

# thermal part of sum_n n^3 at zero lag: int 2 t^3 / (e^{2 pi t} - 1) dt
THERMAL_N3 = 1.0 / 120.0

# int w^3 / (e^{2 pi w} - 1) dw: Planck integral at kT = hbar Omega / 2 pi
_PLANCK_CUBIC = 1.0 / 240.0

EM_DIVERGENT = "zero-point term (1/2) int omega^3 d omega: divergent, kept symbolic"
SCALAR_DIVERGENT = "zero-point term int omega^3 d omega: divergent, kept symbolic"

# per-component prefactor of the discrete single-point field averages
EmNormalization = Literal["printed", "field"]
_EM_PREFACTOR = {"printed": 1.0 / (2.0 * math.pi**2), "field": 1.0 / (4.0 * math.pi**2)}


@dataclass(frozen=True)
class Temperature:
    kelvin: float

    def __post_init__(self):
        if not self.kelvin >= 0:
            raise ValueError("temperature must be non-negative")


@dataclass(frozen=True)
class EnergyDensityReport:
    thermal_value: float  # J m^-3
    thermal_value_nondim: float  # hbar Omega^4 / c^3
    divergent_flag: str
    masking_factor: float
    field_kind: Literal["em", "scalar"]
    t_rot: Temperature
    beta: float
    gamma: float
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.thermal_value < 0 or self.thermal_value_nondim < 0:
            raise ValueError("thermal energy density must be non-negative")


def t_rot(omega: float) -> Temperature:
    """``hbar Omega / (2 pi k_B)``."""
    if omega < 0:
        raise ValueError("omega must be non-negative")
    return Temperature(HBAR * omega / (2.0 * math.pi * BOLTZMANN))


def planck_em_density(T: Temperature | float) -> float:
    """Black-body energy density ``4 sigma T^4 / c`` in J/m^3."""
    kelvin = T.kelvin if isinstance(T, Temperature) else float(T)
    if kelvin < 0:
        raise ValueError("temperature must be non-negative")
    return 4.0 * STEFAN_BOLTZMANN * kelvin**4 / SPEED_OF_LIGHT


def planck_em_density_quadrature(T: Temperature | float) -> float:
    """``(hbar / c^3 pi^2) int omega^3 / (e^{hbar omega/kT} - 1) d omega`` by quadrature."""
    kelvin = T.kelvin if isinstance(T, Temperature) else float(T)
    if kelvin == 0:
        return 0.0
    # integrate in x = hbar omega / kT
    val = integrate.quad(lambda x: x**3 * math.exp(-x) / -math.expm1(-x) if x > 0 else 0.0, 0.0, np.inf,
                         epsabs=0.0, epsrel=1e-13, limit=200)[0]
    scale = (BOLTZMANN * kelvin) ** 4 / HBAR**3
    return scale * val / (SPEED_OF_LIGHT**3 * math.pi**2)


def black_body_nondim() -> float:
    """``w_black(T_rot)`` in units ``hbar Omega^4 / c^3``: ``1 / (240 pi^2)``."""
    return _PLANCK_CUBIC / math.pi**2


def scalar_reference_nondim() -> float:
    """Inertial scalar thermal ``T_44`` reference ``(3/pi) int w^3/(e^{2 pi w}-1)``."""
    return 3.0 / math.pi * _PLANCK_CUBIC


def em_masking_factor(beta: float) -> float:
    g2 = 1.0 / ((1.0 - beta) * (1.0 + beta))
    return 2.0 * (4.0 * g2 - 1.0) / 3.0


def scalar_masking_factor(beta: float) -> float:
    g2 = 1.0 / ((1.0 - beta) * (1.0 + beta))
    return 2.0 * (4.0 * g2 - 1.0) / 9.0


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta < 1.0:
        raise LightCylinderError(f"beta must lie in [0, 1), got {beta!r}")
    if beta > BETA_CEILING:
        raise NearLightCylinderError(f"beta = {beta!r} exceeds the supported ceiling {BETA_CEILING}")


# --- independent assemblies ---------------------------------------------------

def lab_em_covariance_angular(n: int = 16) -> np.ndarray:
    """``int dO sum_lambda w w^T`` for ``w = (eps, khat x eps)``, shape (6, 6).

    Built from explicit polarization vectors on a product grid, exact for the
    quadratic integrand once ``n >= 2``.
    """
    u, phi, w = sphere_grid(n, n)
    kx, ky, kz = (np.broadcast_to(a, np.broadcast_shapes(u.shape, phi.shape)).ravel()
                  for a in unit_vectors(u, phi))
    wts = np.broadcast_to(w, (n, n)).ravel()
    k = np.column_stack([kx, ky, kz])
    total = np.zeros((6, 6))
    for eps in polarization_basis(k):
        vec = np.concatenate([eps, np.cross(k, eps)], axis=1)
        total += np.einsum("n,ni,nj->ij", wts, vec, vec)
    return total


def em_density_assembled(beta: float, *, normalization: EmNormalization = "printed",
                         thermal_n3: float | None = None) -> float:
    """Thermal EM energy density in the rotating frame from first principles.

    ``w = (1/8 pi) sum_a <E_(a)^2 + H_(a)^2>`` with the frame fields obtained
    from the lab covariance by the projection map.  ``thermal_n3`` defaults to
    the zero-lag remainder of the regularized ``sum n^3`` from spectral sums.
    """
    if thermal_n3 is None:
        thermal_n3 = spectral.s3_thermal_integral(0.0)
    params = RotationParams.from_beta(beta)
    cov = _EM_PREFACTOR[normalization] * thermal_n3 * lab_em_covariance_angular()
    M = em_projection_matrix(params, 0.0)
    return float(np.trace(M @ cov @ M.T)) / (8.0 * math.pi)


def em_masking_factor_assembled(beta: float, *, normalization: EmNormalization = "printed") -> float:
    return em_density_assembled(beta, normalization=normalization, thermal_n3=THERMAL_N3) / black_body_nondim()


def lab_scalar_stress_angular(n: int = 16) -> np.ndarray:
    """``(1/4 pi^2) int dO n_i n_k`` with ``n = (khat, -1)``: lab ``T_ik`` per unit ``sum n^3``."""
    u, phi, w = sphere_grid(n, n)
    kx, ky, kz = (np.broadcast_to(a, np.broadcast_shapes(u.shape, phi.shape)).ravel()
                  for a in unit_vectors(u, phi))
    wts = np.broadcast_to(w, (n, n)).ravel()
    nvec = np.column_stack([kx, ky, kz, -np.ones_like(kx)])
    return np.einsum("n,ni,nj->ij", wts, nvec, nvec) / (4.0 * math.pi**2)


def scalar_density_assembled(beta: float, *, thermal_n3: float | None = None) -> float:
    """Frame ``T_(44)`` thermal part: contraction of the lab stress with ``mu_(4)``."""
    if thermal_n3 is None:
        thermal_n3 = spectral.s3_thermal_integral(0.0)
    params = RotationParams.from_beta(beta)
    T_lab = thermal_n3 * lab_scalar_stress_angular()
    return project_scalar_energy(frenet_serret_tetrad(params, 0.0), T_lab)


def scalar_masking_factor_assembled(beta: float) -> float:
    return scalar_density_assembled(beta, thermal_n3=THERMAL_N3) / scalar_reference_nondim()


# --- reports -----------------------------------------------------------------

def _nondim_to_si(omega: float) -> float:
    return HBAR * omega**4 / SPEED_OF_LIGHT**3


def em_density_rotating(params: RotationParams) -> EnergyDensityReport:
    _check_beta(params.beta)
    factor = em_masking_factor(params.beta)
    T = t_rot(params.omega)
    return EnergyDensityReport(
        thermal_value=factor * planck_em_density(T),
        thermal_value_nondim=factor * black_body_nondim(),
        divergent_flag=EM_DIVERGENT,
        masking_factor=factor,
        field_kind="em",
        t_rot=T,
        beta=params.beta,
        gamma=params.gamma,
    )


def scalar_density_rotating(params: RotationParams) -> EnergyDensityReport:
    _check_beta(params.beta)
    factor = scalar_masking_factor(params.beta)
    T = t_rot(params.omega)
    nondim = factor * scalar_reference_nondim()
    return EnergyDensityReport(
        thermal_value=nondim * _nondim_to_si(params.omega),
        thermal_value_nondim=nondim,
        divergent_flag=SCALAR_DIVERGENT,
        masking_factor=factor,
        field_kind="scalar",
        t_rot=T,
        beta=params.beta,
        gamma=params.gamma,
    )


def density_vs_radius_sweep(omega: float, radii, *, c: float = 1.0,
                            field_kind: Literal["em", "scalar"] = "em") -> list[EnergyDensityReport]:
    """Reports for each radius at fixed angular velocity, in input order."""
    make = em_density_rotating if field_kind == "em" else scalar_density_rotating
    rows = []
    for r in radii:
        params = RotationParams(omega, float(r), c)
        rows.append(make(params))
    return rows
