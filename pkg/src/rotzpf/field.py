"""Monte Carlo realizations of the random classical zero-point field.

A realization is a finite superposition of plane waves with independent
uniform phases.  Each sampled wavevector carries both transverse
polarizations.  The weights are k-space cell volumes, so that
``sum_modes weight * g(k)`` estimates ``int d^3k g(k)`` without bias.

Amplitudes (hbar = 1): ``h0^2 = c k / (2 pi^2)`` for E and H, and
``f^2 = c / (2 pi^2 k)`` for the massless scalar.  Each plane wave enters
with amplitude ``sqrt(weight) * h0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from ._quadrature import CFValue
from .correlation import CFComponentId
from .kinematics import EmField, RotationParams, em_projection_matrix, worldline_position
from .spectrum import Spectrum

_HELPER_SWITCH = 0.9
_COLUMNS = "kx_hat ky_hat kz_hat lambda k phase weight"


@dataclass(frozen=True)
class Mode:
    direction: np.ndarray
    polarization_index: int
    wavenumber: float
    phase: float
    weight: float

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float).reshape(3)
        object.__setattr__(self, "direction", d)
        if abs(np.linalg.norm(d) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector")
        if self.polarization_index not in (1, 2):
            raise ValueError("polarization_index must be 1 or 2")
        if self.wavenumber < 0:
            raise ValueError("wavenumber must be non-negative")
        if not 0.0 <= self.phase < 2.0 * math.pi:
            raise ValueError("phase must lie in [0, 2 pi)")
        if not self.weight > 0:
            raise ValueError("weight must be positive")


@dataclass(frozen=True, eq=False)
class ModeSet:
    """Columnar storage of a sampled mode set; row i is one (k, lambda) mode."""

    directions: np.ndarray  # (N, 3)
    polarization_index: np.ndarray  # (N,) int, 1 or 2
    wavenumber: np.ndarray  # (N,)
    phase: np.ndarray  # (N,)
    weight: np.ndarray  # (N,)
    kind: Literal["continuous", "discrete"]
    k_min: float
    k_max: float
    seed: int
    k0: float = 1.0

    def __post_init__(self):
        n = len(self.wavenumber)
        shapes = (self.directions.shape, self.polarization_index.shape, self.phase.shape, self.weight.shape)
        if shapes != ((n, 3), (n,), (n,), (n,)):
            raise ValueError(f"inconsistent column shapes {shapes}")
        if self.kind == "discrete" and n:
            ratio = self.wavenumber / self.k0
            if not np.allclose(ratio, np.round(ratio), rtol=0, atol=1e-9):
                raise ValueError("discrete mode sets need wavenumbers that are multiples of k0")

    def __len__(self):
        return len(self.wavenumber)

    def __getitem__(self, i: int) -> Mode:
        return Mode(self.directions[i], int(self.polarization_index[i]), float(self.wavenumber[i]),
                    float(self.phase[i]), float(self.weight[i]))

    def __eq__(self, other):
        if not isinstance(other, ModeSet):
            return NotImplemented
        meta = ("kind", "k_min", "k_max", "seed", "k0")
        cols = ("directions", "polarization_index", "wavenumber", "phase", "weight")
        return all(getattr(self, m) == getattr(other, m) for m in meta) and all(
            np.array_equal(getattr(self, c), getattr(other, c)) for c in cols
        )

    @classmethod
    def empty(cls, kind: Literal["continuous", "discrete"] = "continuous") -> "ModeSet":
        z = np.zeros(0)
        return cls(np.zeros((0, 3)), np.zeros(0, dtype=int), z, z, z, kind, 0.0, 0.0, 0)

    def polarization_vectors(self) -> np.ndarray:
        """Unit polarization ``eps(k, lambda)`` for every row, shape (N, 3)."""
        return polarization_basis(self.directions)[self.polarization_index - 1, np.arange(len(self))]

    # columnar text replay format

    def save(self, path) -> None:
        header = (
            f"kind={self.kind} k_min={self.k_min!r} k_max={self.k_max!r} "
            f"seed={self.seed} k0={self.k0!r}\n{_COLUMNS}"
        )
        table = np.column_stack([self.directions, self.polarization_index, self.wavenumber,
                                 self.phase, self.weight])
        np.savetxt(path, table, fmt="%.17g", header=header)

    @classmethod
    def load(cls, path) -> "ModeSet":
        with open(path) as fh:
            meta_line = fh.readline().lstrip("#").split()
        meta = dict(item.split("=", 1) for item in meta_line)
        table = np.loadtxt(path, ndmin=2).reshape(-1, 7)
        return cls(
            table[:, 0:3].copy(),
            table[:, 3].astype(int),
            table[:, 4].copy(),
            table[:, 5].copy(),
            table[:, 6].copy(),
            meta["kind"],
            float(meta["k_min"]),
            float(meta["k_max"]),
            int(meta["seed"]),
            float(meta["k0"]),
        )


def polarization_basis(directions: np.ndarray) -> np.ndarray:
    """Orthonormal ``(eps1, eps2)`` transverse to each k-hat, shape (2, N, 3).

    Gram-Schmidt from the z axis, or from the x axis when k-hat is within
    ``acos(0.9)`` of z; ``eps2 = khat x eps1``.
    """
    k = np.asarray(directions, dtype=float).reshape(-1, 3)
    helper = np.zeros_like(k)
    near_z = np.abs(k[:, 2]) > _HELPER_SWITCH
    helper[~near_z, 2] = 1.0
    helper[near_z, 0] = 1.0
    e1 = helper - np.sum(helper * k, axis=1, keepdims=True) * k
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(k, e1)
    return np.stack([e1, e2])


def _random_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    s = np.sqrt(1.0 - u * u)
    d = np.column_stack([s * np.cos(phi), s * np.sin(phi), u])
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def sample_modes(spectrum: Spectrum, n_modes: int, seed: int, *, k0: float = 1.0) -> ModeSet:
    """Draw one realization.

    Continuous band: ``n_modes`` wavevectors, stratified uniformly in ``k^3``
    with uniform directions.  Discrete: ``n_modes`` random directions on
    every shell ``k = n k0``, ``n = 1..n_max``, weighted by ``k0 k^2 dO``.
    Every wavevector yields two rows (lambda = 1, 2) with independent phases.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    rng = np.random.default_rng(seed)
    if spectrum.kind == "continuous":
        if math.isinf(spectrum.k_max):
            raise ValueError("Monte Carlo needs a finite band: the full spectrum diverges")
        lo, hi = spectrum.k_min**3, spectrum.k_max**3
        step = (hi - lo) / n_modes
        k = np.cbrt(lo + step * (np.arange(n_modes) + rng.uniform(0.0, 1.0, n_modes)))
        dirs = _random_directions(rng, n_modes)
        w = np.full(n_modes, 4.0 * math.pi / 3.0 * step)
        k_min, k_max = spectrum.k_min, spectrum.k_max
    else:
        if spectrum.n_max is None:
            raise ValueError("Monte Carlo needs a truncated discrete spectrum (n_max)")
        n = np.repeat(np.arange(1, spectrum.n_max + 1), n_modes)
        k = k0 * n
        dirs = _random_directions(rng, len(k))
        w = k0 * k * k * (4.0 * math.pi / n_modes)
        k_min, k_max = k0, k0 * spectrum.n_max
    m = len(k)
    phase = rng.uniform(0.0, 2.0 * math.pi, 2 * m)
    return ModeSet(
        np.concatenate([dirs, dirs]),
        np.repeat([1, 2], m),
        np.concatenate([k, k]),
        phase,
        np.concatenate([w, w]),
        spectrum.kind,
        float(k_min),
        float(k_max),
        int(seed),
        float(k0),
    )


def _cosines(ms: ModeSet, params: RotationParams, tau) -> np.ndarray:
    """``cos(k.r(tau) - omega t - theta)``, shape (T, N)."""
    x = worldline_position(params, np.atleast_1d(np.asarray(tau, dtype=float)))
    arg = ms.wavenumber * (x[:, :3] @ ms.directions.T - x[:, 3:4]) - ms.phase
    return np.cos(arg)


def em_lab_series(ms: ModeSet, params: RotationParams, tau) -> np.ndarray:
    """Lab ``(E, H)`` 6-vectors along the worldline, shape (T, 6)."""
    amp = np.sqrt(ms.weight * params.c * ms.wavenumber / (2.0 * math.pi**2))
    eps = ms.polarization_vectors()
    hvec = np.cross(ms.directions, eps)
    c = _cosines(ms, params, tau) * amp
    return np.concatenate([c @ eps, c @ hvec], axis=1)


def eval_em_lab(ms: ModeSet, params: RotationParams, tau: float) -> EmField:
    if len(ms) == 0:
        return EmField(np.zeros(3), np.zeros(3))
    v = em_lab_series(ms, params, tau)[0]
    return EmField(v[:3], v[3:])


def eval_scalar_lab(ms: ModeSet, params: RotationParams, tau) -> float | np.ndarray:
    """Scalar field on the worldline (uses the lambda = 1 rows only)."""
    scalar_tau = np.ndim(tau) == 0
    if len(ms) == 0:
        return 0.0 if scalar_tau else np.zeros(np.shape(tau))
    sel = ms.polarization_index == 1
    sub = ModeSet(ms.directions[sel], ms.polarization_index[sel], ms.wavenumber[sel],
                  ms.phase[sel], ms.weight[sel], ms.kind, ms.k_min, ms.k_max, ms.seed, ms.k0)
    amp = np.sqrt(sub.weight * params.c / (2.0 * math.pi**2 * sub.wavenumber))
    out = _cosines(sub, params, tau) @ amp
    return float(out[0]) if scalar_tau else out


def frame_em_series(ms: ModeSet, params: RotationParams, tau) -> np.ndarray:
    """Frenet-Serret frame ``(E_(1..3), H_(1..3))`` along the worldline, shape (T, 6)."""
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    lab = em_lab_series(ms, params, tau)
    proj = em_projection_matrix(params, params.phase(tau))
    return np.einsum("tij,tj->ti", proj, lab)


def realization_seed(master_seed: int, index: int) -> int:
    """Order-independent seed for realization ``index``."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1, np.uint64)[0])


def mc_correlation(
    component: CFComponentId | str,
    params: RotationParams,
    tau1: float,
    tau2: float,
    n_realizations: int,
    spectrum: Spectrum,
    *,
    n_modes: int = 256,
    seed: int = 0,
) -> CFValue:
    """Sample mean and standard error of the product of frame components.

    ``component`` is an EM component label or ``"S"`` for the scalar field.
    """
    if n_realizations < 2:
        raise ValueError("n_realizations must be >= 2")
    scalar = isinstance(component, str) and component.strip().upper() == "S"
    if not scalar:
        comp = CFComponentId.parse(component) if isinstance(component, str) else component
        i, j = comp.rows()
    k0 = params.omega / params.c
    taus = np.array([tau1, tau2], dtype=float)
    products = np.empty(n_realizations)
    for r in range(n_realizations):
        ms = sample_modes(spectrum, n_modes, realization_seed(seed, r), k0=k0)
        if scalar:
            psi = eval_scalar_lab(ms, params, taus)
            products[r] = psi[0] * psi[1]
        else:
            f = frame_em_series(ms, params, taus)
            products[r] = f[0, i] * f[1, j]
    mean = math.fsum(products) / n_realizations
    var = math.fsum((products - mean) ** 2) / (n_realizations - 1)
    return CFValue(mean, math.sqrt(var / n_realizations), "monte-carlo",
                   {"n_realizations": n_realizations, "n_modes": n_modes, "seed": seed,
                    "component": "S" if scalar else str(comp)})
