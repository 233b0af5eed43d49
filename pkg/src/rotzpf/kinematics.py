"""Circular worldline, its Frenet-Serret and Fermi-Walker tetrads, and
projection of lab-frame tensors onto tetrad components.

Conventions: index order (1, 2, 3, 4) with 4 = time, metric
``diag(1, 1, 1, -1)``, ``x^4 = c t``.  Tetrad vectors are stored with upper
(contravariant) indices, one row per tetrad leg ``mu_(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import LightCylinderError, PhysicsConstraintError

ETA = np.diag([1.0, 1.0, 1.0, -1.0])

TetradKind = Literal["frenet-serret", "fermi-walker"]


@dataclass(frozen=True)
class RotationParams:
    """Angular velocity ``omega``, circle radius, and the speed of light.

    The default ``c=1`` gives the nondimensional setting used across the
    package; with ``omega=1`` as well, ``radius`` equals ``beta``.
    """

    omega: float
    radius: float
    c: float = 1.0
    beta: float = field(init=False)
    gamma: float = field(init=False)

    def __post_init__(self):
        if self.omega < 0 or self.radius < 0:
            raise PhysicsConstraintError("omega and radius must be non-negative")
        if self.c <= 0:
            raise PhysicsConstraintError("c must be positive")
        beta = self.omega * self.radius / self.c
        if not beta < 1.0:
            raise LightCylinderError(
                f"beta = omega*radius/c = {beta!r} must be < 1 (light cylinder)"
            )
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", 1.0 / np.sqrt((1.0 - beta) * (1.0 + beta)))

    @classmethod
    def from_beta(cls, beta: float, omega: float = 1.0, c: float = 1.0) -> "RotationParams":
        if not 0.0 <= beta < 1.0:
            raise LightCylinderError(f"beta must lie in [0, 1), got {beta!r}")
        if omega <= 0:
            raise PhysicsConstraintError("from_beta needs omega > 0")
        return cls(omega=omega, radius=beta * c / omega, c=c)

    def phase(self, tau):
        """Rotation angle ``alpha = Omega gamma tau``."""
        return self.omega * self.gamma * np.asarray(tau, dtype=float)


@dataclass(frozen=True)
class Tetrad:
    vectors: np.ndarray  # (4, 4); row a is mu_(a)^i
    tau: float
    kind: TetradKind
    params: RotationParams

    def __getitem__(self, a: int) -> np.ndarray:
        """Leg ``mu_(a)`` with the 1-based label used in the formulas."""
        return self.vectors[a - 1]


@dataclass(frozen=True)
class EmField:
    """Lab-frame electric and magnetic field at one spacetime point."""

    E: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "E", np.asarray(self.E, dtype=float).reshape(3))
        object.__setattr__(self, "H", np.asarray(self.H, dtype=float).reshape(3))


def minkowski_dot(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2] - u[..., 3] * v[..., 3]


def worldline_position(params: RotationParams, tau):
    """Event ``(a cos alpha, a sin alpha, 0, c gamma tau)``; broadcasts over ``tau``."""
    tau = np.asarray(tau, dtype=float)
    alpha = params.phase(tau)
    a = params.radius
    return np.stack(
        [a * np.cos(alpha), a * np.sin(alpha), np.zeros_like(alpha), params.c * params.gamma * tau],
        axis=-1,
    )


def four_velocity(params: RotationParams, tau):
    tau = np.asarray(tau, dtype=float)
    alpha = params.phase(tau)
    bg = params.beta * params.gamma
    return params.c * np.stack(
        [-bg * np.sin(alpha), bg * np.cos(alpha), np.zeros_like(alpha), np.full_like(alpha, params.gamma)],
        axis=-1,
    )


def four_acceleration(params: RotationParams, tau):
    """``dU/dtau``: centripetal, magnitude ``a Omega^2 gamma^2``."""
    tau = np.asarray(tau, dtype=float)
    alpha = params.phase(tau)
    mag = params.radius * params.omega**2 * params.gamma**2
    return np.stack(
        [-mag * np.cos(alpha), -mag * np.sin(alpha), np.zeros_like(alpha), np.zeros_like(alpha)],
        axis=-1,
    )


def frenet_serret_coefficients(params: RotationParams) -> tuple[float, float, float]:
    """Curvatures ``(b, c~, d)`` of the Frenet-Serret system for the circle."""
    g2 = params.gamma**2
    return -params.beta * params.omega * g2, params.omega * g2, 0.0


def frenet_serret_tetrad(params: RotationParams, tau: float) -> Tetrad:
    alpha = float(params.phase(tau))
    g, b = params.gamma, params.beta
    ca, sa = np.cos(alpha), np.sin(alpha)
    vectors = np.array(
        [
            [ca, sa, 0.0, 0.0],
            [-g * sa, g * ca, 0.0, b * g],
            [0.0, 0.0, 1.0, 0.0],
            [-b * g * sa, b * g * ca, 0.0, g],
        ]
    )
    return Tetrad(vectors, float(tau), "frenet-serret", params)


def fermi_walker_tetrad(params: RotationParams, tau: float) -> Tetrad:
    """Non-rotating (Fermi-Walker transported) tetrad.

    Spatial legs precess by the Thomas angle: they carry ``alpha * gamma``
    where the Frenet-Serret legs carry ``alpha``.  Imaginary time components
    of the Euclidean-metric form are written here as real time components.
    """
    alpha = float(params.phase(tau))
    g, b = params.gamma, params.beta
    ca, sa = np.cos(alpha), np.sin(alpha)
    cp, sp = np.cos(alpha * g), np.sin(alpha * g)
    vectors = np.array(
        [
            [ca * cp + g * sa * sp, sa * cp - g * ca * sp, 0.0, -b * g * sp],
            [ca * sp - g * sa * cp, sa * sp + g * ca * cp, 0.0, b * g * cp],
            [0.0, 0.0, 1.0, 0.0],
            [-b * g * sa, b * g * ca, 0.0, g],
        ]
    )
    return Tetrad(vectors, float(tau), "fermi-walker", params)


def frame_components(tetrad: Tetrad, vector) -> np.ndarray:
    """``V_(a) = mu_(a)^i g_ik V^k`` for a contravariant lab vector."""
    return tetrad.vectors @ ETA @ np.asarray(vector, dtype=float)


def orthonormality_residual(tetrad: Tetrad) -> float:
    gram = tetrad.vectors @ ETA @ tetrad.vectors.T
    return float(np.max(np.abs(gram - ETA)))


def field_tensor(E, H) -> np.ndarray:
    """Covariant ``F_ik`` with ``F_4a = E_a`` and ``(F_23, F_31, F_12) = H``."""
    E1, E2, E3 = np.asarray(E, dtype=float)
    H1, H2, H3 = np.asarray(H, dtype=float)
    return np.array(
        [
            [0.0, H3, -H2, -E1],
            [-H3, 0.0, H1, -E2],
            [H2, -H1, 0.0, -E3],
            [E1, E2, E3, 0.0],
        ]
    )


def em_projection_matrix(params: RotationParams, alpha) -> np.ndarray:
    """Linear map ``(E_lab, H_lab) -> (E_(a), H_(a))`` in the Frenet-Serret frame.

    Returns shape ``alpha.shape + (6, 6)``.
    """
    alpha = np.asarray(alpha, dtype=float)
    g, bg = params.gamma, params.beta * params.gamma
    ca, sa = np.cos(alpha), np.sin(alpha)
    z = np.zeros_like(alpha)
    one = np.ones_like(alpha)
    rows = [
        # E_(1) = gamma (E1 cos + E2 sin) - beta gamma H3
        [g * ca, g * sa, z, z, z, -bg * one],
        # E_(2) = -E1 sin + E2 cos
        [-sa, ca, z, z, z, z],
        # E_(3) = gamma E3 + beta gamma (H1 cos + H2 sin)
        [z, z, g * one, bg * ca, bg * sa, z],
        # H_(1) = gamma (H1 cos + H2 sin) + beta gamma E3
        [z, z, bg * one, g * ca, g * sa, z],
        # H_(2) = -H1 sin + H2 cos
        [z, z, z, -sa, ca, z],
        # H_(3) = gamma H3 - beta gamma (E1 cos + E2 sin)
        [-bg * ca, -bg * sa, z, z, z, g * one],
    ]
    return np.moveaxis(np.array(rows, dtype=float), (0, 1), (-2, -1))


def project_em_tensor(tetrad: Tetrad, lab: EmField) -> tuple[np.ndarray, np.ndarray]:
    """Electric and magnetic field measured in a Frenet-Serret frame."""
    if tetrad.kind != "frenet-serret":
        raise ValueError("project_em_tensor is defined for Frenet-Serret tetrads only")
    alpha = float(tetrad.params.phase(tetrad.tau))
    out = em_projection_matrix(tetrad.params, alpha) @ np.concatenate([lab.E, lab.H])
    return out[:3], out[3:]


def project_scalar_energy(tetrad: Tetrad, T) -> float:
    """Energy density ``T_(44) = mu_(4)^i mu_(4)^k T_ik`` seen in the frame."""
    T = np.asarray(T, dtype=float)
    if T.shape != (4, 4) or not np.allclose(T, T.T, rtol=0, atol=1e-14 * max(1.0, np.abs(T).max())):
        raise ValueError("T must be a symmetric 4x4 array")
    u = tetrad[4]
    return float(u @ T @ u)
