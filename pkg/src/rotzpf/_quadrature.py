"""Shared numerical helpers: tensor-product sphere quadrature and the
result container for correlation-function evaluations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Literal

import numpy as np

from .errors import NumericalError

Method = Literal["monte-carlo", "quadrature", "closed-form", "discrete-sum"]


@dataclass(frozen=True)
class CFValue:
    value: float
    std_error: float = 0.0
    method: Method = "quadrature"
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be non-negative")
        if self.method == "monte-carlo" and self.std_error == 0.0:
            raise ValueError("monte-carlo estimates carry a positive std_error")


_EPS = float(np.finfo(float).eps)
ROUNDOFF_ULPS = 64


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def sphere_grid(n_u: int, n_phi: int, phi_shift: float = 0.0):
    """Nodes ``(u, phi)`` and weights for ``int dO = int du dphi``.

    Gauss-Legendre in ``u = cos(theta)``, trapezoid in the periodic ``phi``.
    """
    x, w = _gauss_legendre(n_u)
    phi = phi_shift + 2.0 * np.pi * np.arange(n_phi) / n_phi
    return x[:, None], phi[None, :], w[:, None] * (2.0 * np.pi / n_phi)


def unit_vectors(u, phi):
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    return s * np.cos(phi), s * np.sin(phi), u + 0.0 * phi


def sphere_integrate(
    func: Callable[[np.ndarray, np.ndarray, float], np.ndarray],
    *,
    rtol: float = 1e-12,
    atol: float = 0.0,
    n_start: int = 32,
    n_limit: int = 2048,
) -> tuple[float, float, int]:
    """Integrate ``func(u, phi, dphi)`` over the unit sphere.

    The grid is refined by doubling in both directions until two successive
    estimates agree to ``max(atol, rtol*|I|)``, or to the roundoff floor
    ``ROUNDOFF_ULPS * eps * int |f|`` when the integrand cancels.  Returns
    ``(value, error_estimate, n_nodes_per_direction)``.
    """
    def estimate(n):
        u, phi, w = sphere_grid(n, n)
        wf = w * func(u, phi, 2.0 * np.pi / n)
        return float(np.sum(wf)), float(np.sum(np.abs(wf)))

    n = n_start
    prev, _ = estimate(n)
    while True:
        n *= 2
        cur, mass = estimate(n)
        err = abs(cur - prev)
        if err <= max(atol, rtol * abs(cur), ROUNDOFF_ULPS * _EPS * mass):
            return cur, err, n
        if n >= n_limit:
            raise NumericalError(
                f"sphere quadrature not converged at n={n}: value {cur!r}, error estimate {err!r}"
            )
        prev = cur
