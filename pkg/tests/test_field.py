import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rotzpf import correlation as cf
from rotzpf.field import (Mode, ModeSet, eval_em_lab, eval_scalar_lab, frame_em_series, mc_correlation,
                          polarization_basis, realization_seed, sample_modes)
from rotzpf.kinematics import RotationParams, worldline_position
from rotzpf.spectrum import Spectrum

BAND = Spectrum.continuous(0.5, 1.5)


def test_sampling_is_deterministic():
    assert sample_modes(BAND, 32, 7) == sample_modes(BAND, 32, 7)
    assert sample_modes(BAND, 32, 7) != sample_modes(BAND, 32, 8)


def test_realization_seeds_distinct_and_stable():
    seeds = [realization_seed(3, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert seeds == [realization_seed(3, i) for i in range(100)]


def test_directions_uniform_on_sphere():
    ms = sample_modes(BAND, 100_000, 1)
    d = ms.directions[: len(ms) // 2]
    sigma = math.sqrt(1 / 3 / len(d))
    assert np.all(np.abs(d.mean(axis=0)) < 3 * sigma)
    # second moments: <n_i n_j> = delta_ij / 3
    assert np.allclose(d.T @ d / len(d), np.eye(3) / 3, atol=5 * math.sqrt(0.1 / len(d)))


def test_band_sampling_weights_sum_to_shell_volume():
    ms = sample_modes(BAND, 64, 0)
    vol = 4 * math.pi / 3 * (1.5**3 - 0.5**3)
    assert math.fsum(ms.weight[: len(ms) // 2]) == pytest.approx(vol, rel=1e-13)
    assert np.all((ms.wavenumber >= 0.5) & (ms.wavenumber <= 1.5))


def test_discrete_wavenumbers_are_multiples_of_k0():
    ms = sample_modes(Spectrum.discrete(5), 10, 0, k0=0.5)
    assert sorted(set(np.round(ms.wavenumber / 0.5, 12))) == [1, 2, 3, 4, 5]
    with pytest.raises(ValueError):
        ModeSet(np.array([[0, 0, 1.0]]), np.array([1]), np.array([0.7]), np.array([0.0]), np.array([1.0]),
                "discrete", 0.5, 1.0, 0, 0.5)


def test_unbounded_spectra_rejected():
    with pytest.raises(ValueError):
        sample_modes(Spectrum(), 4, 0)
    with pytest.raises(ValueError):
        sample_modes(Spectrum.discrete(), 4, 0)
    with pytest.raises(ValueError):
        sample_modes(BAND, 0, 0)


@given(st.floats(-1, 1), st.floats(0, 2 * math.pi))
def test_polarization_completeness(u, phi):
    s = math.sqrt(1 - u * u)
    k = np.array([[s * math.cos(phi), s * math.sin(phi), u]])
    e1, e2 = polarization_basis(k)
    assert abs(e1[0] @ k[0]) < 1e-14 and abs(e2[0] @ k[0]) < 1e-14
    assert np.allclose(np.outer(e1[0], e1[0]) + np.outer(e2[0], e2[0]) + np.outer(k[0], k[0]), np.eye(3),
                       atol=1e-14)
    assert np.allclose(np.cross(k[0], e1[0]), e2[0], atol=1e-15)


def test_empty_mode_set_gives_zero_field():
    p = RotationParams.from_beta(0.5)
    f = eval_em_lab(ModeSet.empty(), p, 1.0)
    assert np.all(f.E == 0) and np.all(f.H == 0)
    assert eval_scalar_lab(ModeSet.empty(), p, 1.0) == 0.0


def test_single_mode_field_by_substitution():
    p = RotationParams.from_beta(0.4)
    k = np.array([0.6, 0.0, 0.8])
    ms = ModeSet(k[None, :], np.array([2]), np.array([1.3]), np.array([0.4]), np.array([0.25]),
                 "continuous", 0.0, 2.0, 0)
    tau = 0.77
    x = worldline_position(p, tau)
    e = polarization_basis(k[None, :])[1, 0]
    amp = 0.5 * math.sqrt(1.3 / (2 * math.pi**2))
    c = math.cos(1.3 * (k @ x[:3] - x[3]) - 0.4)
    f = eval_em_lab(ms, p, tau)
    assert np.allclose(f.E, amp * c * e, atol=1e-15)
    assert np.allclose(f.H, amp * c * np.cross(k, e), atol=1e-15)
    assert abs(f.E @ f.H) < 1e-15


def test_mode_validation():
    with pytest.raises(ValueError):
        Mode(np.array([1.0, 1.0, 0.0]), 1, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Mode(np.array([1.0, 0.0, 0.0]), 3, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Mode(np.array([1.0, 0.0, 0.0]), 1, 1.0, 7.0, 1.0)
    m = sample_modes(BAND, 3, 0)[4]
    assert m.polarization_index == 2


def test_save_load_round_trip(tmp_path):
    for spec in (BAND, Spectrum.discrete(3)):
        ms = sample_modes(spec, 5, 11, k0=0.5)
        path = tmp_path / f"{spec.kind}.modes"
        ms.save(path)
        assert ModeSet.load(path) == ms
        first = path.read_text().splitlines()[:2]
        assert first[0].startswith("# kind=") and first[1] == "# kx_hat ky_hat kz_hat lambda k phase weight"


def test_mc_requires_two_realizations():
    with pytest.raises(ValueError):
        mc_correlation("E11", RotationParams.from_beta(0.3), 0.0, 1.0, 1, BAND)


def _mc_vs_quad(comp, beta, delta, n=300, seed=0):
    p = RotationParams.from_beta(beta)
    mc = mc_correlation(comp, p, 0.0, delta / p.gamma, n, BAND, n_modes=64, seed=seed)
    lag = cf.CFLagParams(delta, beta)
    if comp == "S":
        q = cf.scalar_cf_quadrature(lag, spectrum=BAND).value
    else:
        q = cf.em_cf_quadrature(comp, lag, spectrum=BAND).value
    return mc, q


@pytest.mark.parametrize("comp,beta,delta", [("E11", 0.6, 0.0), ("H22", 0.3, 1.0), ("EH11", 0.6, 0.0),
                                             ("EH12", 0.5, 0.7), ("S", 0.6, 0.0), ("S", 0.4, 1.5)])
def test_mc_matches_quadrature(comp, beta, delta):
    mc, q = _mc_vs_quad(comp, beta, delta)
    assert abs(mc.value - q) < 3.5 * mc.std_error


def test_equal_time_e_dot_h_averages_out():
    # <E_i H_i> at equal times is zero in the lab frame
    p = RotationParams.from_beta(0.0)
    for comp in ("EH11", "EH22", "EH33"):
        mc = mc_correlation(comp, p, 0.0, 0.0, 300, BAND, n_modes=64, seed=5)
        assert abs(mc.value) < 3.5 * mc.std_error
        assert cf.em_cf_quadrature(comp, cf.CFLagParams(1e-300, 0.0), spectrum=BAND).value == pytest.approx(0, abs=1e-14)


def test_std_error_scales_as_inverse_sqrt_n():
    p = RotationParams.from_beta(0.5)
    a = mc_correlation("E11", p, 0.0, 0.5, 100, BAND, n_modes=32, seed=2).std_error
    b = mc_correlation("E11", p, 0.0, 0.5, 1600, BAND, n_modes=32, seed=2).std_error
    assert a / b == pytest.approx(4.0, rel=0.25)


def test_mc_stationary_in_start_time():
    p = RotationParams.from_beta(0.5)
    a = mc_correlation("E22", p, 0.0, 0.8, 300, BAND, n_modes=64, seed=3)
    b = mc_correlation("E22", p, 2.0, 2.8, 300, BAND, n_modes=64, seed=4)
    assert abs(a.value - b.value) < 3.5 * math.hypot(a.std_error, b.std_error)


def test_discrete_realization_periodic_along_orbit():
    p = RotationParams(1.0, 0.6)
    ms = sample_modes(Spectrum.discrete(4), 8, 0, k0=p.omega / p.c)
    period = 2 * math.pi / (p.omega * p.gamma)
    f = frame_em_series(ms, p, [0.3, 0.3 + period, 0.3 + 3 * period])
    assert np.allclose(f[1], f[0], atol=1e-11) and np.allclose(f[2], f[0], atol=1e-10)
    s = eval_scalar_lab(ms, p, np.array([0.3, 0.3 + period]))
    assert s[1] == pytest.approx(s[0], abs=1e-11)


def test_mc_reproducible():
    p = RotationParams.from_beta(0.2)
    a = mc_correlation("E11", p, 0.0, 0.5, 10, BAND, n_modes=8, seed=9)
    assert a == mc_correlation("E11", p, 0.0, 0.5, 10, BAND, n_modes=8, seed=9)
    assert a.method == "monte-carlo" and a.std_error > 0
