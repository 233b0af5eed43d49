"""Self-test harness: every module's invariants evaluated on fixed grids.

The report is a deterministic function of the seed, so two runs with the
same seed produce byte-identical text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from . import correlation as cf
from . import kinematics as kin
from . import spectral, thermo
from .constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT, STEFAN_BOLTZMANN
from .field import mc_correlation
from .spectrum import Spectrum, k_integral_abel_limit


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual)) and self.residual <= self.tolerance


def _rel(a, b):
    return abs(a - b) / abs(b)


def _worst(*values) -> float:
    """Max that propagates NaN, so a broken evaluation cannot pass silently."""
    arr = np.asarray(values, dtype=float)
    return float(np.nan) if np.isnan(arr).any() else float(arr.max())


def check_tetrads() -> list[Check]:
    betas = np.linspace(0.0, 0.99, 10)
    taus = np.linspace(-7.0, 13.0, 10)
    ortho = rest = fs_acc = fw_acc = 0.0
    for b in betas:
        p = kin.RotationParams.from_beta(b)
        for t in taus:
            fs, fw = kin.frenet_serret_tetrad(p, t), kin.fermi_walker_tetrad(p, t)
            ortho = _worst(ortho, kin.orthonormality_residual(fs), kin.orthonormality_residual(fw))
            U, A = kin.four_velocity(p, t), kin.four_acceleration(p, t)
            rest = _worst(rest, np.max(np.abs(kin.frame_components(fs, U) - [0, 0, 0, -p.c])))
            mag = p.radius * p.omega**2 * p.gamma**2
            fs_acc = _worst(fs_acc, np.max(np.abs(kin.frame_components(fs, A) - [-mag, 0, 0, 0])))
            ag = float(p.phase(t)) * p.gamma
            want = [-mag * math.cos(ag), -mag * math.sin(ag), 0, 0]
            fw_acc = _worst(fw_acc, np.max(np.abs(kin.frame_components(fw, A) - want)))
    return [
        Check("tetrad orthonormality", ortho, 1e-12),
        Check("frenet-serret rest condition", rest, 1e-12),
        Check("frenet-serret constant acceleration", fs_acc, 1e-12),
        Check("fermi-walker rotating acceleration", fw_acc, 1e-12),
    ]


def check_angular_integrals() -> list[Check]:
    worst = 0.0
    for k in (0.0, 0.3, 0.7, 0.99):
        for p in (1, 3, 5):
            ref = integrate.quad(lambda t: math.sin(t) ** p / (1 - k * k * math.sin(t) ** 2) ** 3.5,
                                 0, math.pi, epsabs=0, epsrel=1e-13, limit=200)[0]
            worst = _worst(worst, _rel(cf.theta_integral(p, k), ref))
    az = 0.0
    for b in (0.0, 0.3, 0.7, 0.99):
        for m in (0, 1, 2):
            ref = integrate.quad(lambda f: math.sin(f) ** m / (1 + b * math.sin(f)) ** 4,
                                 0, 2 * math.pi, epsabs=1e-13, epsrel=1e-13, limit=400)[0]
            val = cf.azimuthal_integral(m, b)
            az = _worst(az, abs(val - ref) / max(abs(ref), 1.0))
    return [Check("theta integrals vs quadrature", worst, 1e-10),
            Check("azimuthal integrals vs quadrature", az, 1e-10)]


def check_k_integral() -> list[Check]:
    worst = 0.0
    for X in (0.1, 0.3, 1.0, 3.0, 10.0):
        worst = _worst(worst, _rel(k_integral_abel_limit(3, X)[0], 6.0 / X**4))
        worst = _worst(worst, _rel(k_integral_abel_limit(1, X)[0], -1.0 / X**2))
    return [Check("abel-regularized k-integral", worst, 1e-6)]


def check_em_cf() -> list[Check]:
    closed = 0.0
    for b in (0.0, 0.3, 0.6, 0.9):
        for d in (0.1, 1.0, 2.5, 4.0, 6.0):
            lag = cf.CFLagParams(d, b)
            closed = _worst(closed, _rel(cf.em_cf_quadrature("E11", lag).value, cf.em_cf_closed_E11(lag)))
    offd = stat = hh = anti = 0.0
    for b, d in ((0.3, 1.0), (0.8, 2.0)):
        lag = cf.CFLagParams(d, b)
        e11 = cf.em_cf_quadrature("E11", lag).value
        for comp in ("E13", "E31", "E23", "E32"):
            offd = _worst(offd, abs(cf.em_cf_quadrature(comp, lag).value) / abs(e11))
        anti = _worst(anti, abs(cf.em_cf_quadrature("E12", lag).value + cf.em_cf_quadrature("E21", lag).value)
                   / abs(e11))
        stat = _worst(stat, _rel(cf.em_cf_quadrature("E22", lag, center=0.9).value,
                              cf.em_cf_quadrature("E22", lag).value))
        for a in (1, 2, 3):
            hh = _worst(hh, _rel(cf.em_cf_quadrature(f"H{a}{a}", lag).value,
                              cf.em_cf_quadrature(f"E{a}{a}", lag).value))
    lag0 = cf.CFLagParams(1.0, 0.0)
    e12_static = _rel(cf.em_cf_quadrature("E12", lag0).value,
                      -math.sin(1.0) * cf.em_cf_quadrature("E11", lag0).value / math.cos(1.0))
    return [
        Check("E11 closed form vs quadrature", closed, 1e-8),
        Check("E13, E23 vanish", offd, 1e-12),
        Check("E12 antisymmetric in the frame indices", anti, 1e-12),
        Check("E12 static-field frame rotation", e12_static, 1e-10),
        Check("stationarity in the mean angle", stat, 1e-10),
        Check("HH equals EE diagonal", hh, 1e-10),
    ]


def check_scalar_cf() -> list[Check]:
    worst = 0.0
    for b in (0.0, 0.5, 0.9):
        p = kin.RotationParams.from_beta(b)
        for d in (0.1, 1.0, 3.0, 6.0):
            lag = cf.CFLagParams(d, b)
            ref = cf.scalar_cf_closed(p, d / (p.omega * p.gamma))
            worst = _worst(worst, _rel(cf.scalar_cf_quadrature(lag).value, ref),
                        _rel(cf.scalar_cf_phi_route(lag), ref))
    p0 = kin.RotationParams(1.0, 0.0)
    r0 = _worst(*[abs(cf.scalar_cf_closed(p0, t) + 1.0 / (math.pi * t * t)) * t * t for t in (0.3, 1.0, 5.0)])
    return [Check("scalar closed form vs quadrature", worst, 1e-10),
            Check("scalar zero-radius reduction", r0, 1e-15)]


def check_spectral() -> list[Check]:
    funcs = [lambda x: np.exp(-x), lambda x: x**3 * np.exp(-x), lambda x: 1.0 / (1.0 + x) ** 4]
    ap = 0.0
    for f in funcs:
        r = spectral.abel_plana(f)
        ap = _worst(ap, abs(r.formula_value - r.direct_sum) / abs(r.direct_sum))
    alt = _worst(*[_rel(spectral.s3_alt_series(F), float(spectral.s3_closed_total(F))) for F in (0.5, 1.0, 3.0, 5.0)])
    reg = 0.0
    for F in (1.0, 2.0, 3.0):
        reg = _worst(reg, abs(spectral.abel_limit(3, F)[0] - float(spectral.s3_closed_total(F))),
                  abs(spectral.abel_limit(1, F)[0] - float(spectral.s1_closed_total(F))))
    return [
        Check("abel-plana identity", ap, 1e-8),
        Check("S_d closed vs alternate series", alt, 1e-10),
        Check("epsilon-regularized sums vs closed totals", reg, 1e-6),
        Check("S_d(pi) = 1/8", abs(float(spectral.s3_closed_total(math.pi)) - 0.125), 0.0),
        Check("thermal n^3 remainder at zero lag = 1/120",
              abs(spectral.s3_thermal_integral(0.0) - 1.0 / 120.0) * 120.0, 1e-10),
    ]


def check_thermo() -> list[Check]:
    ident = _rel(4.0 * STEFAN_BOLTZMANN / SPEED_OF_LIGHT,
                 math.pi**2 * BOLTZMANN**4 / (15.0 * HBAR**3 * SPEED_OF_LIGHT**3))
    em = sc = e2e = ratio = 0.0
    for b in np.linspace(0.0, 0.99, 12):
        em = _worst(em, _rel(thermo.em_masking_factor_assembled(b), thermo.em_masking_factor(b)))
        sc = _worst(sc, _rel(thermo.scalar_masking_factor_assembled(b), thermo.scalar_masking_factor(b)))
        p = kin.RotationParams.from_beta(b)
        e2e = _worst(e2e,
                  _rel(thermo.em_density_assembled(b), thermo.em_density_rotating(p).thermal_value_nondim),
                  _rel(thermo.scalar_density_assembled(b), thermo.scalar_density_rotating(p).thermal_value_nondim))
        ratio = _worst(ratio, abs(thermo.em_masking_factor(b) / thermo.scalar_masking_factor(b) - 3.0))
    sweep = thermo.density_vs_radius_sweep(1.0, np.linspace(0.1, 0.9, 9))
    vals = [r.thermal_value_nondim for r in sweep]
    mono = 0.0 if all(b > a for a, b in zip(vals, vals[1:])) else 1.0
    return [
        Check("4 sigma / c constants identity", ident, 4 * np.finfo(float).eps),
        Check("em masking factor from angular assembly", em, 1e-12),
        Check("scalar masking factor from contraction", sc, 1e-12),
        Check("thermal densities end-to-end through spectral sums", e2e, 1e-8),
        Check("em / scalar masking ratio = 3", ratio, 1e-14),
        Check("radius sweep strictly increasing", mono, 0.0),
    ]


def check_periodicity() -> list[Check]:
    worst = 0.0
    for b in (0.3, 0.7):
        lag, lag2 = cf.CFLagParams(1.0, b), cf.CFLagParams(1.0 + 2 * math.pi, b)
        worst = _worst(worst, _rel(spectral.discrete_em_cf_E11(lag2).value, spectral.discrete_em_cf_E11(lag).value),
                    _rel(spectral.discrete_scalar_cf(lag2).value, spectral.discrete_scalar_cf(lag).value))
    return [Check("discrete CFs 2 pi periodic", worst, 1e-10)]


def check_monte_carlo(seed: int) -> list[Check]:
    p = kin.RotationParams.from_beta(0.6)
    band = Spectrum.continuous(0.5, 1.5)
    mc = mc_correlation("E11", p, 0.0, 0.8, 200, band, n_modes=64, seed=seed)
    q = cf.em_cf_quadrature("E11", cf.CFLagParams.from_params(p, 0.8), spectrum=band).value
    return [Check("band-limited MC vs quadrature (sigmas)", abs(mc.value - q) / mc.std_error, 3.0)]


SUITE: tuple[Callable[[], list[Check]], ...] = (
    check_tetrads, check_angular_integrals, check_k_integral, check_em_cf, check_scalar_cf,
    check_spectral, check_thermo, check_periodicity,
)


def run_suite(seed: int = 0) -> list[Check]:
    checks: list[Check] = []
    for fn in SUITE:
        checks.extend(fn())
    checks.extend(check_monte_carlo(seed))
    return checks


def format_report(checks: list[Check], seed: int) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"# validate seed={seed}", f"{'check':<{width}}  {'max_residual':>12}  {'tolerance':>9}  status"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {c.residual:12.3e}  {c.tolerance:9.1e}  {'PASS' if c.passed else 'FAIL'}")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"# {len(checks) - n_fail}/{len(checks)} passed")
    return "\n".join(lines) + "\n"
