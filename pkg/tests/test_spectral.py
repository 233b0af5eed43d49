import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from rotzpf import spectral
from rotzpf.correlation import CFLagParams
from rotzpf.errors import PoleError

TWO_PI = 2 * math.pi

# frozen from 30-digit mpmath evaluations
S3_TOTAL_F1 = 6.0105021403750735486026770289  # sum_m 6/(1 + 2 pi m)^4
S3_THERMAL_F1 = 0.010502140375073548602677028896  # int 2 t^3 cosh t / (e^{2 pi t} - 1)
S1_THERMAL_F1 = -0.087671324835010705388393379828  # -int 2 t cosh t / (e^{2 pi t} - 1)
DISCRETE_E11_B06_D1 = 17.0252757333408643602789988201
DISCRETE_SCALAR_B06_D1 = -0.503879909453798030659108158258

lattice_free = st.floats(0.05, TWO_PI - 0.05)


@pytest.mark.parametrize(
    "f,exact",
    [
        (lambda x: np.exp(-x), 1.0 / (1.0 - math.exp(-1.0))),
        (lambda x: x**3 * np.exp(-x), None),
        (lambda x: 1.0 / (1.0 + x) ** 4, math.pi**4 / 90),
        (lambda x: np.exp(-2.0 * x) * (1.0 + x) ** 2, None),
    ],
)
def test_abel_plana_identity(f, exact):
    r = spectral.abel_plana(f)
    assert r.formula_value == pytest.approx(r.direct_sum, rel=1e-8)
    if exact is not None:
        assert r.direct_sum == pytest.approx(exact, rel=1e-12)


def test_abel_plana_parts_for_exponential():
    r = spectral.abel_plana(lambda x: np.exp(-x))
    assert r.integral_part == pytest.approx(1.0, rel=1e-13)
    assert r.half_f0 == 0.5


def test_s3_closed_at_pi():
    s = spectral.s3_closed(math.pi)
    assert s.total == pytest.approx(0.125, rel=1e-15)
    assert float(spectral.s3_closed_total(math.pi)) == 0.125
    assert s.divergent.lag_value == pytest.approx(6 / math.pi**4)
    assert s.thermal == pytest.approx(0.125 - 6 / math.pi**4, rel=1e-14)
    assert s.thermal == pytest.approx(0.063404, abs=1e-6)


def test_s3_oracle_values():
    assert float(spectral.s3_closed_total(1.0)) == pytest.approx(S3_TOTAL_F1, rel=1e-15)
    assert spectral.s3_closed(1.0).thermal == pytest.approx(S3_THERMAL_F1, rel=1e-12)
    assert spectral.s3_thermal_integral(1.0) == pytest.approx(S3_THERMAL_F1, rel=1e-12)


@pytest.mark.parametrize("F", [0.0, TWO_PI, -4 * math.pi])
def test_s3_closed_rejects_poles(F):
    with pytest.raises(PoleError):
        spectral.s3_closed(F)


def test_thermal_remainder_at_zero_lag():
    assert spectral.s3_thermal_integral(0.0) == pytest.approx(1 / 120, rel=1e-12)
    assert float(spectral.s3_bracket(0.0)) == pytest.approx(1 / 120, rel=1e-14)
    assert spectral.s1_thermal_integral(0.0) == pytest.approx(-1 / 12, rel=1e-12)


def test_zeta4_constant():
    zeta4 = math.fsum(1.0 / n**4 for n in range(1, 200000)) + 1 / (3 * 200000.0**3)
    assert 12 * zeta4 / TWO_PI**4 == pytest.approx(1 / 120, rel=1e-12)


@given(lattice_free)
def test_s3_bracket_matches_planck_integral(F):
    assert float(spectral.s3_bracket(F)) == pytest.approx(spectral.s3_thermal_integral(F), rel=1e-10)


@given(lattice_free)
def test_s1_bracket_matches_planck_integral(F):
    assert float(spectral.s1_bracket(F)) == pytest.approx(spectral.s1_thermal_integral(F), rel=1e-10)


@given(st.floats(0.05, TWO_PI - 0.05))
def test_s3_closed_equals_alternate_series(F):
    assert spectral.s3_alt_series(F) == pytest.approx(float(spectral.s3_closed_total(F)), rel=1e-10)


def test_s3_alternate_series_at_one_with_tail():
    assert spectral.s3_alt_series(1.0, n_terms=10_000) == pytest.approx(S3_TOTAL_F1, rel=1e-12)


def test_s3_alternate_series_small_lag_constant():
    # 6/F^4 cancellation limits how small F can go
    F = 0.05
    assert spectral.s3_alt_series(F) - 6 / F**4 == pytest.approx(1 / 120, rel=1e-3)
    assert spectral.s3_alt_series(F) - 6 / F**4 == pytest.approx(float(spectral.s3_bracket(F)), abs=1e-9)


@given(lattice_free)
def test_s3_alternate_series_even(F):
    assert spectral.s3_alt_series(-F) == pytest.approx(spectral.s3_alt_series(F), rel=1e-14)


def test_s3_alternate_series_rejects():
    with pytest.raises((PoleError, ValueError)):
        spectral.s3_alt_series(TWO_PI)


@pytest.mark.parametrize("F", [1.0, 2.0, 3.0])
def test_epsilon_regularized_p3(F):
    val, err = spectral.abel_limit(3, F)
    assert val == pytest.approx(float(spectral.s3_closed_total(F)), abs=1e-6)


@pytest.mark.parametrize("F", [1.0, 2.0, math.pi])
def test_epsilon_regularized_p1(F):
    val, err = spectral.abel_limit(1, F)
    assert val == pytest.approx(float(spectral.s1_closed_total(F)), abs=1e-6)


def test_s1_at_pi():
    assert float(spectral.s1_closed_total(math.pi)) == pytest.approx(-0.25, rel=1e-15)
    val, _ = spectral.abel_limit(1, math.pi)
    assert val == pytest.approx(-0.25, abs=1e-8)


def test_s1_split():
    s = spectral.s1_sum(1.0)
    assert s.divergent.lag_value == -1.0
    assert s.thermal == pytest.approx(S1_THERMAL_F1, rel=1e-12)
    assert s.total == pytest.approx(-1 / (4 * math.sin(0.5) ** 2), rel=1e-12)


@given(lattice_free)
def test_s1_even(F):
    assert spectral.s1_sum(-F).total == pytest.approx(spectral.s1_sum(F).total, rel=1e-12)


def test_s1_thermal_grows_near_two_pi():
    a, b = abs(spectral.s1_thermal_integral(6.2)), abs(spectral.s1_thermal_integral(6.28))
    assert b > 10 * a


def test_planck_cosh_integral_rejects_beyond_two_pi():
    with pytest.raises(ValueError):
        spectral.s3_thermal_integral(7.0)


def test_truncated_sum_matches_loop():
    F = 0.77
    assert float(spectral.truncated_sum(3, F, 9)) == pytest.approx(
        math.fsum(n**3 * math.cos(n * F) for n in range(1, 10)), rel=1e-14)


def test_phase_argument_bounds():
    ky = np.linspace(-1, 1, 101)
    F = spectral.phase_argument(2.0, 0.7, ky)
    assert np.all(np.abs(F) <= 2.0 * 1.7)


def test_discrete_e11_oracle():
    assert spectral.discrete_em_cf_E11(CFLagParams(1.0, 0.6)).value == pytest.approx(DISCRETE_E11_B06_D1, rel=1e-12)


def test_discrete_scalar_oracle():
    assert spectral.discrete_scalar_cf(CFLagParams(1.0, 0.6)).value == pytest.approx(
        DISCRETE_SCALAR_B06_D1, rel=1e-12)


@pytest.mark.parametrize("delta", [0.5, 1.0, 2.5])
def test_discrete_static_frame_factorizes(delta):
    # beta = 0: F_d = delta everywhere; the angular factors are 4 pi, 0, 4 pi/3, 4 pi/3
    S = float(spectral.s3_closed_total(delta))
    coeff = 4 * math.pi * math.cos(delta) - (4 * math.pi / 3) * math.cos(delta / 2) ** 2 \
        + (4 * math.pi / 3) * math.sin(delta / 2) ** 2
    want = coeff * S / (4 * math.pi**2)
    assert spectral.discrete_em_cf_E11(CFLagParams(delta, 0.0)).value == pytest.approx(want, rel=1e-12)
    assert spectral.discrete_scalar_cf(CFLagParams(delta, 0.0)).value == pytest.approx(
        4 * math.pi * float(spectral.s1_closed_total(delta)) / (4 * math.pi**2), rel=1e-12)


@pytest.mark.parametrize("beta", [0.2, 0.6, 0.9])
@pytest.mark.parametrize("n", [1, 2])
def test_discrete_cfs_periodic(beta, n):
    a, b = CFLagParams(1.0, beta), CFLagParams(1.0 + n * TWO_PI, beta)
    assert spectral.discrete_em_cf_E11(b).value == pytest.approx(spectral.discrete_em_cf_E11(a).value, rel=1e-10)
    assert spectral.discrete_scalar_cf(b).value == pytest.approx(spectral.discrete_scalar_cf(a).value, rel=1e-10)


@given(st.floats(0.1, 6.0), st.floats(0.0, 0.9))
def test_discrete_cfs_even(delta, beta):
    a, b = CFLagParams(delta, beta), CFLagParams(-delta, beta)
    assert spectral.discrete_em_cf_E11(b).value == pytest.approx(spectral.discrete_em_cf_E11(a).value, rel=1e-10)
    assert spectral.discrete_scalar_cf(b).value == pytest.approx(spectral.discrete_scalar_cf(a).value, rel=1e-10)


def test_discrete_thermal_part_anisotropic():
    # the Planck-weighted remainder depends on direction through F_d when beta > 0
    d, beta = 1.0, 0.8
    Fs = [spectral.phase_argument(d, beta, ky) for ky in (-1.0, 0.0, 1.0)]
    vals = [spectral.s1_thermal_integral(F) for F in Fs]
    assert len({round(v, 12) for v in vals}) == 3


def test_discrete_truncated_matches_direct_angular_sum():
    lag = CFLagParams(1.0, 0.5)
    val = spectral.discrete_em_cf_E11(lag, n_max=6).value
    g2 = 1 / (1 - 0.25)

    def f(th, ph):
        kx, ky = math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph)
        F = 1.0 - 2 * 0.5 * math.sin(0.5) * ky
        c = g2 * math.cos(1.0) + 2 * 0.5 * g2 * math.cos(0.5) * ky + g2 * (0.25 - math.cos(0.5) ** 2) * kx**2 \
            + g2 * (0.25 + math.sin(0.5) ** 2) * ky**2
        return c * sum(n**3 * math.cos(n * F) for n in range(1, 7)) * math.sin(th)

    ref = integrate.dblquad(lambda ph, th: f(th, ph), 0, math.pi, 0, TWO_PI, epsabs=1e-12, epsrel=1e-12)[0]
    assert val == pytest.approx(ref / (4 * math.pi**2), rel=1e-9)


def test_pole_nodes_are_perturbed_and_counted():
    # beta = 0 and delta on the lattice puts every node on a pole
    res = spectral.discrete_scalar_cf(CFLagParams(TWO_PI + 1e-9, 0.0), rtol=1e-6)
    assert res.info["perturbed_nodes"] > 0
