"""Two-point correlation functions of the zero-point field seen by the
rotating detector, evaluated deterministically.

Two independent routes are provided for the electromagnetic field:

* ``em_cf_quadrature``: exact polarization sums of the tetrad-projected
  plane waves, radial integral done in closed form, then a 2-D angular
  quadrature.  Works for every component and any spectrum.
* ``em_cf_closed_E11``: the elementary-function form of ``<E_(1) E_(1)>``.

Units are nondimensional (c = hbar = Omega = 1): EM correlations in
``hbar Omega^4 / c^3``, scalar ones in ``hbar Omega^2 / c``.  The lag is
``delta = Omega gamma (tau2 - tau1)``, which also equals ``c (t2 - t1)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate

from ._quadrature import CFValue, sphere_integrate, unit_vectors
from .errors import LightCylinderError, PoleError
from .kinematics import RotationParams, em_projection_matrix
from .constants import HBAR, SPEED_OF_LIGHT
from .spectrum import Spectrum

FOUR_PI2 = 4.0 * math.pi**2


@dataclass(frozen=True)
class CFLagParams:
    delta: float
    beta: float

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise LightCylinderError(f"beta must lie in [0, 1), got {self.beta!r}")

    @classmethod
    def from_params(cls, params: RotationParams, dtau: float) -> "CFLagParams":
        return cls(params.omega * params.gamma * dtau, params.beta)

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt((1.0 - self.beta) * (1.0 + self.beta))

    @property
    def kconst(self) -> float:
        """``-beta sin(delta/2)/(delta/2)``; ``-beta`` at zero lag."""
        return -self.beta * float(np.sinc(self.delta / (2.0 * math.pi)))

    @property
    def lab_dt(self) -> float:
        """``c (t2 - t1)`` in units of ``c/Omega``."""
        return self.delta


_COMPONENT_RE = re.compile(r"^(EE|HH|EH|HE|E|H)([123])([123])$")


@dataclass(frozen=True)
class CFComponentId:
    field_pair: Literal["EE", "HH", "EH", "HE"]
    a: int
    b: int

    def __post_init__(self):
        if self.field_pair not in ("EE", "HH", "EH", "HE") or not {self.a, self.b} <= {1, 2, 3}:
            raise ValueError(f"invalid component {self!r}")

    @classmethod
    def parse(cls, text: str) -> "CFComponentId":
        """``"E11"``, ``"H23"``, ``"EH13"`` ... (first field at tau1, second at tau2)."""
        m = _COMPONENT_RE.match(text.strip().upper())
        if not m:
            raise ValueError(f"cannot parse component {text!r}")
        pair = m.group(1)
        pair = pair * 2 if len(pair) == 1 else pair
        return cls(pair, int(m.group(2)), int(m.group(3)))

    def rows(self) -> tuple[int, int]:
        """Row indices into the 6-vector ``(E_(1..3), H_(1..3))``."""
        off = {"E": 0, "H": 3}
        return off[self.field_pair[0]] + self.a - 1, off[self.field_pair[1]] + self.b - 1

    def __str__(self):
        return f"{self.field_pair}{self.a}{self.b}"


# --- closed-form building blocks ----------------------------------------------

def theta_integral(p: int, kconst: float) -> float:
    """``int_0^pi sin^p(t) / (1 - k^2 sin^2 t)^{7/2} dt`` for p in {1, 3, 5}."""
    if abs(kconst) >= 1.0:
        raise ValueError("|kconst| must be < 1")
    q = 1.0 - kconst * kconst
    if p == 1:
        return 2.0 / (5.0 * q) + 8.0 / (15.0 * q**2) + 16.0 / (15.0 * q**3)
    if p == 3:
        return 4.0 / (15.0 * q**2) + 16.0 / (15.0 * q**3)
    if p == 5:
        return 16.0 / (15.0 * q**3)
    raise ValueError("p must be 1, 3 or 5")


def azimuthal_integral(m: int, b: float) -> float:
    """``int_0^{2 pi} sin^m(phi) / (1 + b sin phi)^4 dphi`` for m in {0, 1, 2}."""
    if abs(b) >= 1.0:
        raise ValueError("|b| must be < 1")
    d = (1.0 - b * b) ** 3.5
    if m == 0:
        return math.pi * (2.0 + 3.0 * b * b) / d
    if m == 1:
        return -b * math.pi * (4.0 + b * b) / d
    if m == 2:
        return math.pi * (1.0 + 4.0 * b * b) / d
    raise ValueError("m must be 0, 1 or 2")


def em_cf_closed_E11(lag: CFLagParams) -> float:
    """``<E_(1)(tau1) E_(1)(tau2)>`` in elementary functions (full continuous spectrum)."""
    if lag.delta == 0.0:
        raise PoleError("zero lag: the correlation function diverges")
    k, b = lag.kconst, lag.beta
    ch = math.cos(0.5 * lag.delta)
    cd = math.cos(lag.delta)
    pi = math.pi
    g1 = 2.0 * pi * cd
    g3 = 3 * pi * k * k * cd - 2 * pi * ch * ch + 2 * pi * b * b - 8 * pi * b * k * ch + pi
    g5 = -3 * pi * k * k * ch * ch + 3 * pi * b * b * k * k - 2 * pi * b * k**3 * ch + 4 * pi * k * k
    bracket = g1 * theta_integral(1, k) + g3 * theta_integral(3, k) + g5 * theta_integral(5, k)
    return 3.0 / (2.0 * pi**2 * lag.lab_dt**4) * lag.gamma**2 * bracket


# --- quadrature route -------------------------------------------------------

def _polarization_factor(kx, ky, kz, u, v):
    """``sum_lambda (u . w_lambda)(v . w_lambda)`` for the plane-wave 6-vectors
    ``w = (eps, khat x eps)``; u, v are rows of the frame projection maps."""
    uE, uH, vE, vH = u[:3], u[3:], v[:3], v[3:]

    def dot(a):
        return a[0] * kx + a[1] * ky + a[2] * kz

    def kcross(a, b):  # khat . (a x b)
        c = np.cross(a, b)
        return c[0] * kx + c[1] * ky + c[2] * kz

    return (
        uE @ vE - dot(uE) * dot(vE)
        + uH @ vH - dot(uH) * dot(vH)
        + kcross(uE, vH) + kcross(vE, uH)
    )


def _lag_vector(beta, alpha1, alpha2):
    return beta * np.array(
        [math.cos(alpha2) - math.cos(alpha1), math.sin(alpha2) - math.sin(alpha1), 0.0]
    )


def em_cf_quadrature(
    component: CFComponentId | str,
    lag: CFLagParams,
    *,
    spectrum: Spectrum = Spectrum(),
    center: float = 0.0,
    rtol: float = 1e-12,
) -> CFValue:
    """Any ``<X_(a)(tau1) Y_(b)(tau2)>`` by angular quadrature.

    ``center`` is the mean rotation angle ``(alpha1 + alpha2)/2``; the result
    does not depend on it (stationarity), which the tests exploit.
    """
    comp = CFComponentId.parse(component) if isinstance(component, str) else component
    params = RotationParams.from_beta(lag.beta)
    a1, a2 = center - 0.5 * lag.delta, center + 0.5 * lag.delta
    i, j = comp.rows()
    u = em_projection_matrix(params, a1)[i]
    v = em_projection_matrix(params, a2)[j]
    dr = _lag_vector(lag.beta, a1, a2)

    def integrand(uu, phi, dphi):
        kx, ky, kz = unit_vectors(uu, phi)
        X = kx * dr[0] + ky * dr[1] - lag.lab_dt
        return _polarization_factor(kx, ky, kz, u, v) * spectrum.radial(X, 3)

    val, err, n = sphere_integrate(integrand, rtol=rtol, atol=1e-15 * _em_scale(lag, spectrum))
    return CFValue(val / FOUR_PI2, 0.0, "quadrature",
                   {"quad_error": err / FOUR_PI2, "grid": n, "component": str(comp)})


def _em_scale(lag, spectrum):
    # rough magnitude of the integrand, only used to set an absolute floor
    if spectrum.kind == "continuous" and not math.isinf(spectrum.k_max):
        return spectrum.k_max**4
    if spectrum.kind == "discrete" and spectrum.n_max is not None:
        return float(spectrum.n_max) ** 4
    return 6.0 / max(abs(lag.delta), 1e-3) ** 4


def em_cf_hh_eh(component: CFComponentId | str, lag: CFLagParams, **kw) -> CFValue:
    """Magnetic and mixed electric-magnetic correlations (quadrature route)."""
    comp = CFComponentId.parse(component) if isinstance(component, str) else component
    if comp.field_pair == "EE":
        raise ValueError("use em_cf_quadrature or em_cf_closed_E11 for EE components")
    return em_cf_quadrature(comp, lag, **kw)


# --- massless scalar ------------------------------------------------------------

def scalar_cf_closed(params: RotationParams, dtau: float) -> float:
    """``-(c/pi) / [(c gamma dtau)^2 - 4 r^2 sin^2(Omega gamma dtau/2)]`` (hbar = 1)."""
    if dtau == 0.0:
        raise PoleError("zero lag: the scalar correlation function diverges")
    B = params.c * params.gamma * dtau
    E = 2.0 * params.radius * math.sin(0.5 * params.omega * params.gamma * dtau)
    return -params.c / (math.pi * (B * B - E * E))


def scalar_cf_quadrature(lag: CFLagParams, *, spectrum: Spectrum = Spectrum(), rtol: float = 1e-12) -> CFValue:
    """``(1/4 pi^2) int dO K_1(X)`` over the sphere; units ``hbar Omega^2 / c``."""
    dr = _lag_vector(lag.beta, -0.5 * lag.delta, 0.5 * lag.delta)

    def integrand(uu, phi, dphi):
        kx, ky, _ = unit_vectors(uu, phi)
        return spectrum.radial(kx * dr[0] + ky * dr[1] - lag.lab_dt, 1)

    val, err, n = sphere_integrate(integrand, rtol=rtol, atol=1e-300)
    return CFValue(val / FOUR_PI2, 0.0, "quadrature", {"quad_error": err / FOUR_PI2, "grid": n})


def scalar_cf_phi_route(lag: CFLagParams) -> float:
    """Scalar CF via the closed phi-integral ``2 pi B / (B^2 - E^2)^{3/2}``, then
    adaptive quadrature over theta."""
    if lag.delta == 0.0:
        raise PoleError("zero lag")
    B = abs(lag.lab_dt)
    E0 = 2.0 * lag.beta * math.sin(0.5 * lag.delta)

    def f(theta):
        E = E0 * math.sin(theta)
        return math.sin(theta) * 2.0 * math.pi * B / (B * B - E * E) ** 1.5

    val = integrate.quad(f, 0.0, math.pi, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    return -val / FOUR_PI2


# --- unit conversion ------------------------------------------------------------

def em_cf_to_si(value: float, omega: float) -> float:
    """Nondimensional EM correlation to SI (Gaussian field units, J/m^3)."""
    return value * HBAR * omega**4 / SPEED_OF_LIGHT**3


def scalar_cf_to_si(value: float, omega: float) -> float:
    """Nondimensional scalar correlation to SI (J/m)."""
    return value * HBAR * omega**2 / SPEED_OF_LIGHT
