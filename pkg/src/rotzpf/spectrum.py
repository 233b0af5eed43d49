"""Spectrum configurations and their radial lag kernels.

A correlation function of the random field reduces to an angular integral
of a polarization factor times ``K_p(X) = int k^p cos(kX) dk`` (continuous
spectrum) or ``sum_n n^p cos(nX)`` (discrete spectrum), with p = 3 for the
electromagnetic field and p = 1 for the massless scalar.  Wavenumbers are
in units of ``k0 = Omega/c``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate

from . import spectral
from .errors import PoleError

# series below this |k X| avoids cancellation in the antiderivative
_SERIES_SWITCH = 0.5


def _band_antiderivative(power, k, X):
    s, c = np.sin(k * X), np.cos(k * X)
    if power == 3:
        return s * (k**3 / X - 6.0 * k / X**3) + c * (3.0 * k * k / X**2 - 6.0 / X**4)
    return k * s / X + c / X**2


def _band_series(power, k, X):
    out = np.zeros(np.broadcast_shapes(np.shape(k), np.shape(X)))
    kx2 = (k * X) ** 2
    term_scale = k ** (power + 1)
    for m in range(14):
        out = out + (-1) ** m * kx2**m / (math.factorial(2 * m) * (2 * m + power + 1))
    return term_scale * out


def band_kernel(power: int, X, k_min: float, k_max: float):
    """``int_{k_min}^{k_max} k^p cos(kX) dk`` (finite everywhere)."""
    X = np.asarray(X, dtype=float)
    out = np.empty_like(X)
    small = np.abs(X) * k_max < _SERIES_SWITCH
    if np.any(small):
        Xs = X[small]
        out[small] = _band_series(power, k_max, Xs) - _band_series(power, k_min, Xs)
    if np.any(~small):
        Xl = X[~small]
        out[~small] = _band_antiderivative(power, k_max, Xl) - _band_antiderivative(power, k_min, Xl)
    return out


# eps / |X| ratios for the damped k-integral; the damped value is even in eps
K_EPS_RATIOS = tuple(0.3 * 0.75**j for j in range(7))


def damped_k_integral(power: int, X: float, eps: float) -> float:
    """``int_0^inf k^p cos(kX) e^{-eps k} dk`` by oscillatory quadrature.

    Integrated in ``s = eps k`` on ``[0, 80]``; the neglected tail is below
    ``e^{-80}`` relative.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    with warnings.catch_warnings():
        # QAWO flags roundoff once the absolute floor is reached; the value is still accurate
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = integrate.quad(lambda s: s**power * math.exp(-s), 0.0, 80.0, weight="cos",
                             wvar=X / eps, limit=4000, epsabs=1e-15, epsrel=0.0)[0]
    return val / eps ** (power + 1)


def k_integral_abel_limit(power: int, X: float, ratios=K_EPS_RATIOS) -> tuple[float, float]:
    """``lim_{eps->0+} int k^p cos(kX) e^{-eps k} dk`` and an error estimate.

    Polynomial extrapolation in ``eps^2`` over ``eps = ratio * |X|``.
    """
    if X == 0.0:
        raise PoleError("X = 0: the damped integral has no finite limit")
    eps = [r * abs(X) for r in ratios]
    ys = [damped_k_integral(power, X, e) for e in eps]
    return spectral.extrapolate_to_zero([e * e for e in eps], ys)


@dataclass(frozen=True)
class Spectrum:
    """Which part of the zero-point spectrum a computation uses.

    ``continuous``: the band ``[k_min, k_max]``; the default full band is
    handled by Abel regularization (``6/X^4``, ``-1/X^2``).
    ``discrete``: ``k = n k0`` for ``n = 1..n_max`` (all n when ``n_max`` is
    None, again Abel-regularized).
    """

    kind: Literal["continuous", "discrete"] = "continuous"
    k_min: float = 0.0
    k_max: float = math.inf
    n_max: int | None = None

    def __post_init__(self):
        if self.kind == "continuous":
            if not 0.0 <= self.k_min < self.k_max:
                raise ValueError(f"empty band [{self.k_min}, {self.k_max}]")
        elif self.kind == "discrete":
            if self.n_max is not None and self.n_max < 1:
                raise ValueError("n_max must be >= 1")
        else:
            raise ValueError(f"unknown spectrum kind {self.kind!r}")

    @classmethod
    def continuous(cls, k_min: float = 0.0, k_max: float = math.inf) -> "Spectrum":
        return cls("continuous", float(k_min), float(k_max))

    @classmethod
    def discrete(cls, n_max: int | None = None) -> "Spectrum":
        return cls("discrete", n_max=n_max)

    @property
    def regularized(self) -> bool:
        """True when the radial integral/sum diverges and is Abel-regularized."""
        if self.kind == "continuous":
            return math.isinf(self.k_max)
        return self.n_max is None

    def radial(self, X, power: int):
        if power not in (1, 3):
            raise ValueError("power must be 1 or 3")
        X = np.asarray(X, dtype=float)
        if self.kind == "continuous":
            if math.isinf(self.k_max):
                if self.k_min != 0.0:
                    raise ValueError("semi-infinite bands with k_min > 0 are not supported")
                if np.any(X == 0.0):
                    raise PoleError("zero lag: the full-spectrum kernel diverges")
                return 6.0 / X**4 if power == 3 else -1.0 / X**2
            return band_kernel(power, X, self.k_min, self.k_max)
        if self.n_max is None:
            return spectral.s3_closed_total(X) if power == 3 else spectral.s1_closed_total(X)
        return spectral.truncated_sum(power, X, self.n_max)
