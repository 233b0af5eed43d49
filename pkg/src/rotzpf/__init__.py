"""Random classical zero-point radiation seen by a rotating detector:
tetrads, correlation functions, discrete-spectrum sums and thermal energy
densities."""

from ._quadrature import CFValue
from .correlation import (
    CFComponentId,
    CFLagParams,
    azimuthal_integral,
    em_cf_closed_E11,
    em_cf_hh_eh,
    em_cf_quadrature,
    scalar_cf_closed,
    scalar_cf_quadrature,
    theta_integral,
)
from .errors import LightCylinderError, NearLightCylinderError, NumericalError, PhysicsConstraintError, PoleError
from .field import Mode, ModeSet, eval_em_lab, eval_scalar_lab, mc_correlation, sample_modes
from .kinematics import (
    EmField,
    RotationParams,
    Tetrad,
    fermi_walker_tetrad,
    four_acceleration,
    four_velocity,
    frenet_serret_tetrad,
    project_em_tensor,
    project_scalar_energy,
    worldline_position,
)
from .spectral import (
    SpectralSplit,
    abel_plana,
    discrete_em_cf_E11,
    discrete_scalar_cf,
    s1_sum,
    s3_alt_series,
    s3_closed,
)
from .spectrum import Spectrum
from .thermo import (
    EnergyDensityReport,
    Temperature,
    density_vs_radius_sweep,
    em_density_rotating,
    planck_em_density,
    scalar_density_rotating,
    t_rot,
)

__version__ = "0.1.0"
