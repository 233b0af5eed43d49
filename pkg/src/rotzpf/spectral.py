"""Discrete-spectrum machinery: the Abel-Plana formula, the regularized sums
``sum n^p cos(nF)`` for p = 1, 3 and their thermal remainders, and the
periodic correlation functions built from them.

All quantities are nondimensional (c = hbar = Omega = 1, so k0 = 1 and the
lag phase ``F_d`` is an angle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy import integrate, interpolate, special

from ._quadrature import CFValue, sphere_integrate, unit_vectors
from .errors import NumericalError, PoleError

TWO_PI = 2.0 * math.pi
Part = Literal["total", "thermal"]


@dataclass(frozen=True)
class DivergentTerm:
    """Stand-in for ``int_0^inf w^p cos(w F) dw``.

    The integral is never summed; ``lag_value`` is its Abel-regularized
    value at finite lag (``6/F^4`` for p = 3, ``-1/F^2`` for p = 1).
    """

    power: int
    lag_value: float


@dataclass(frozen=True)
class SpectralSplit:
    divergent: DivergentTerm
    thermal: float
    F_d: float

    @property
    def total(self) -> float:
        return self.divergent.lag_value + self.thermal


@dataclass(frozen=True)
class AbelPlanaResult:
    direct_sum: float
    integral_part: float
    half_f0: float
    correction_part: float

    @property
    def formula_value(self) -> float:
        return self.integral_part + self.half_f0 + self.correction_part


def _check_lattice(F, what="F_d", allow_zero=False):
    F = np.asarray(F, dtype=float)
    m = np.round(F / TWO_PI)
    dist = np.abs(F - TWO_PI * m)
    on = dist < 1e-12 * np.maximum(1.0, np.abs(F))
    if allow_zero:
        on &= m != 0
    if np.any(on):
        raise PoleError(f"{what} on the pole lattice 2*pi*Z: {F!r}")
    return F


# --- Abel-Plana -----------------------------------------------------------

def abel_plana(
    f: Callable[[complex], complex],
    *,
    n_terms_max: int = 10**6,
    term_tol: float = 1e-18,
    quad_tol: float = 1e-13,
) -> AbelPlanaResult:
    """Both sides of the Abel-Plana formula for ``sum_{n>=0} f(n)``.

    ``f`` must accept complex arguments, be analytic in the right half-plane
    and decay fast enough that every piece converges; this is not checked.
    The direct sum stops after 16 consecutive terms below ``term_tol``
    relative to the running sum.
    """
    terms = []
    running = 0.0
    small = 0
    for n in range(n_terms_max):
        t = complex(f(n)).real
        terms.append(t)
        running += t
        if abs(t) <= term_tol * max(1.0, abs(running)):
            small += 1
            if small >= 16:
                break
        else:
            small = 0
    else:
        raise NumericalError("direct sum did not converge within n_terms_max terms")
    direct = math.fsum(terms)

    kw = dict(epsabs=0.0, epsrel=quad_tol, limit=500)
    integral_part = integrate.quad(lambda x: complex(f(x)).real, 0.0, np.inf, **kw)[0]

    def corr(t):
        if t == 0.0:
            return 0.0
        num = complex(f(1j * t)) - complex(f(-1j * t))
        return (1j * num).real * math.exp(-TWO_PI * t) / -math.expm1(-TWO_PI * t)

    correction = integrate.quad(corr, 0.0, np.inf, **kw)[0]
    return AbelPlanaResult(direct, integral_part, 0.5 * complex(f(0.0)).real, correction)


# --- p = 3 ----------------------------------------------------------------

def _bracket3_series(F):
    # sum_{m != 0} 6/(F + 2 pi m)^4 expanded in F; converges for |F| < 2 pi
    F2 = np.asarray(F, dtype=float) ** 2
    out = np.zeros_like(F2)
    for j in range(16):
        c = 12.0 * math.comb(2 * j + 3, 3) * special.zeta(2 * j + 4) / TWO_PI ** (2 * j + 4)
        out = out + c * F2**j
    return out


def s3_closed_total(F):
    """Regularized ``sum_{n>=0} n^3 cos(nF) = (3 - 2 s^2)/(8 s^4)``, ``s = sin(F/2)``."""
    F = _check_lattice(F)
    s2 = np.sin(0.5 * F) ** 2
    return (3.0 - 2.0 * s2) / (8.0 * s2 * s2)


def s3_bracket(F):
    """Periodic remainder ``S_d - 6/F^4``; equals the Planck-weighted integral for |F| < 2 pi."""
    F = _check_lattice(F, allow_zero=True)
    small = np.abs(F) < 1.0
    Fs = np.where(small, 1.0, F)
    s2 = np.sin(0.5 * Fs) ** 2
    out = (3.0 - 2.0 * s2) / (8.0 * s2 * s2) - 6.0 / Fs**4
    if np.any(small):
        out = np.where(small, _bracket3_series(np.where(small, F, 0.0)), out)
    return out


def s3_closed(F_d: float) -> SpectralSplit:
    F_d = float(F_d)
    if F_d == 0.0:
        raise PoleError("F_d = 0: the 6/F_d^4 split is undefined")
    _check_lattice(F_d)
    return SpectralSplit(DivergentTerm(3, 6.0 / F_d**4), float(s3_bracket(F_d)), F_d)


def _planck_cosh_integral(power: int, F: float) -> float:
    # int_0^inf 2 t^p cosh(tF) / (e^{2 pi t} - 1) dt, written with decaying exponentials
    aF = abs(F)
    if aF >= TWO_PI:
        raise ValueError("the Planck-weighted integral diverges for |F| >= 2 pi")
    lo, hi = TWO_PI - aF, TWO_PI + aF

    def integrand(t):
        if t == 0.0:
            return 0.0
        return t**power * (math.exp(-lo * t) + math.exp(-hi * t)) / -math.expm1(-TWO_PI * t)

    # scale the upper region to the decay length so quad resolves it
    split = 40.0 / lo
    a = integrate.quad(integrand, 0.0, split, epsabs=0.0, epsrel=1e-13, limit=500)[0]
    b = integrate.quad(integrand, split, np.inf, epsabs=0.0, epsrel=1e-13, limit=500)[0]
    return a + b


def s3_thermal_integral(F: float) -> float:
    """Abel-Plana correction ``int 2 t^3 cosh(tF)/(e^{2 pi t}-1) dt`` by quadrature."""
    return _planck_cosh_integral(3, float(F))


def s3_alt_series_tail(F_d: float, n_terms: int) -> float:
    """Leading-order estimate of the omitted terms n > n_terms."""
    x2 = (F_d / TWO_PI) ** 2
    z = lambda s: special.zeta(s, n_terms + 1)  # noqa: E731
    return 6.0 * (2 * z(4) + 20 * x2 * z(6) + 70 * x2**2 * z(8)) / TWO_PI**4


def s3_alt_series(F_d: float, n_terms: int = 10_000) -> float:
    """``6/F^4 + 6 sum_n (2 pi n)^-4 [(1 + F/2 pi n)^-4 + (1 - F/2 pi n)^-4]`` plus tail estimate."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    F_d = float(F_d)
    if F_d == 0.0 or abs(F_d) >= TWO_PI:
        raise PoleError("alternate series needs 0 < |F_d| < 2 pi")
    n = np.arange(n_terms, 0, -1, dtype=float)  # smallest terms first
    terms = (TWO_PI * n + F_d) ** -4 + (TWO_PI * n - F_d) ** -4
    return 6.0 / F_d**4 + 6.0 * math.fsum(terms) + s3_alt_series_tail(F_d, n_terms)


# --- p = 1 ----------------------------------------------------------------

def s1_closed_total(F):
    """Regularized ``sum_{n>=0} n cos(nF) = -1 / (4 sin^2(F/2))``."""
    F = _check_lattice(F)
    return -0.25 / np.sin(0.5 * F) ** 2


def s1_bracket(F):
    """Periodic remainder ``sum n cos(nF) + 1/F^2``."""
    F = _check_lattice(F, allow_zero=True)
    small = np.abs(F) < 1.0
    Fs = np.where(small, 1.0, F)
    out = -0.25 / np.sin(0.5 * Fs) ** 2 + 1.0 / Fs**2
    if np.any(small):
        F2 = np.where(small, F, 0.0) ** 2
        ser = np.zeros_like(F2)
        for j in range(16):
            ser = ser - 2.0 * (2 * j + 1) * special.zeta(2 * j + 2) / TWO_PI ** (2 * j + 2) * F2**j
        out = np.where(small, ser, out)
    return out


def s1_thermal_integral(F: float) -> float:
    """``-int 2 t cosh(tF)/(e^{2 pi t}-1) dt`` by quadrature (|F| < 2 pi)."""
    return -_planck_cosh_integral(1, float(F))


def s1_sum(F_d: float) -> SpectralSplit:
    """Abel-Plana split of ``sum n cos(n F_d)``; thermal part by quadrature."""
    F_d = float(F_d)
    if F_d == 0.0:
        raise PoleError("F_d = 0: the -1/F_d^2 split is undefined")
    _check_lattice(F_d)
    return SpectralSplit(DivergentTerm(1, -1.0 / F_d**2), s1_thermal_integral(F_d), F_d)


# --- Abel (exponential) regularization -------------------------------------

DEFAULT_EPS_GRID = tuple(0.04 * 2.0**-j for j in range(6))


def abel_regularized_sum(power: int, F: float, eps: float) -> float:
    """``sum_{n>=1} n^p cos(nF) e^{-eps n}`` by direct summation in extended precision."""
    n = np.arange(1, int(60.0 / eps) + 2, dtype=np.longdouble)
    terms = n**power * np.cos(n * np.longdouble(F)) * np.exp(-np.longdouble(eps) * n)
    return float(np.sum(terms[::-1]))


def extrapolate_to_zero(xs, ys) -> tuple[float, float]:
    """Polynomial (Richardson-type) extrapolation of ``y(x)`` to ``x = 0``.

    The error estimate is the change when the largest ``x`` is dropped.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    full = float(interpolate.barycentric_interpolate(xs, ys, 0.0))
    reduced = float(interpolate.barycentric_interpolate(xs[1:], ys[1:], 0.0))
    return full, abs(full - reduced)


def abel_limit(power: int, F: float, eps_grid=DEFAULT_EPS_GRID) -> tuple[float, float]:
    """``lim_{eps->0} sum n^p cos(nF) e^{-eps n}`` and an error estimate."""
    ys = [abel_regularized_sum(power, F, e) for e in eps_grid]
    return extrapolate_to_zero(eps_grid, ys)


# --- discrete-spectrum correlation functions -------------------------------

def truncated_sum(power: int, F, n_max: int):
    F = np.asarray(F, dtype=float)
    out = np.zeros_like(F)
    for n in range(n_max, 0, -1):
        out = out + float(n) ** power * np.cos(n * F)
    return out


def _lag_kernel(power: int, F, part: Part, n_max: int | None):
    if n_max is not None:
        if part != "total":
            raise ValueError("a truncated sum has no thermal split")
        return truncated_sum(power, F, n_max)
    if power == 3:
        return s3_closed_total(F) if part == "total" else s3_bracket(F)
    return s1_closed_total(F) if part == "total" else s1_bracket(F)


def _pole_safe(F_fn, kernel, near=1e-6):
    """Wrap a sphere integrand so nodes with F_d within ``near`` of 2 pi Z are
    moved by half a phi step; the number of moved nodes is recorded."""
    moved = [0]

    def integrand(u, phi, dphi):
        phi = np.broadcast_to(phi, np.broadcast_shapes(u.shape, phi.shape))
        F = F_fn(u, phi)
        bad = np.abs(F - TWO_PI * np.round(F / TWO_PI)) < near
        if np.any(bad):
            moved[0] += int(bad.sum())
            phi = np.where(bad, phi + 0.5 * dphi, phi)
        return kernel(u, phi)

    return integrand, moved


def phase_argument(delta: float, beta: float, ky):
    """``F_d = delta - 2 beta k_y sin(delta/2)``."""
    return delta - 2.0 * beta * np.asarray(ky) * math.sin(0.5 * delta)


def discrete_em_cf_E11(
    lag,
    *,
    n_max: int | None = None,
    part: Part = "total",
    rtol: float = 1e-12,
) -> CFValue:
    """Periodic ``<E_(1) E_(1)>`` for the discrete spectrum ``omega = n Omega``.

    Angular integral of the four coefficient groups times ``S_d(F_d)``.
    ``part="thermal"`` keeps only the periodic remainder ``S_d - 6/F_d^4``;
    ``n_max`` truncates the mode sum instead of regularizing it.
    Units ``hbar Omega^4 / c^3``.
    """
    d, b = float(lag.delta), float(lag.beta)
    g2 = 1.0 / (1.0 - b * b)
    c1 = g2 * math.cos(d)
    cy = 2.0 * b * g2 * math.cos(0.5 * d)
    cxx = g2 * (b * b - math.cos(0.5 * d) ** 2)
    cyy = g2 * (b * b + math.sin(0.5 * d) ** 2)

    def F_fn(u, phi):
        _, ky, _ = unit_vectors(u, phi)
        return phase_argument(d, b, ky)

    def kernel(u, phi):
        kx, ky, _ = unit_vectors(u, phi)
        S = _lag_kernel(3, phase_argument(d, b, ky), part, n_max)
        return (c1 + cy * ky + cxx * kx * kx + cyy * ky * ky) * S

    integrand, moved = _pole_safe(F_fn, kernel)
    val, err, n = sphere_integrate(integrand, rtol=rtol, atol=1e-300)
    return CFValue(
        val / (4.0 * math.pi**2),
        0.0,
        "discrete-sum",
        {"part": part, "n_max": n_max, "quad_error": err / (4.0 * math.pi**2), "grid": n,
         "perturbed_nodes": moved[0]},
    )


def discrete_scalar_cf(lag, *, n_max: int | None = None, part: Part = "total", rtol: float = 1e-12) -> CFValue:
    """Periodic scalar ``<psi psi>`` = ``(1/4 pi^2) int dO sum n cos(n F_d)``; units ``hbar Omega^2 / c``."""
    d, b = float(lag.delta), float(lag.beta)

    def F_fn(u, phi):
        return phase_argument(d, b, unit_vectors(u, phi)[1])

    def kernel(u, phi):
        return _lag_kernel(1, F_fn(u, phi), part, n_max)

    integrand, moved = _pole_safe(F_fn, kernel)
    val, err, n = sphere_integrate(integrand, rtol=rtol, atol=1e-300)
    return CFValue(
        val / (4.0 * math.pi**2),
        0.0,
        "discrete-sum",
        {"part": part, "n_max": n_max, "quad_error": err / (4.0 * math.pi**2), "grid": n,
         "perturbed_nodes": moved[0]},
    )
