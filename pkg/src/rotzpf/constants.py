"""CODATA 2018 constants (SI), fixed here so results do not drift with scipy releases."""

import math

SPEED_OF_LIGHT = 299792458.0  # m s^-1, exact
PLANCK = 6.62607015e-34  # J s, exact
HBAR = PLANCK / (2.0 * math.pi)  # 1.054571817...e-34 J s
BOLTZMANN = 1.380649e-23  # J K^-1, exact
# exact in the SI; the tabulated 5.670374419e-8 is this value rounded to 10 digits
STEFAN_BOLTZMANN = 2.0 * math.pi**5 * BOLTZMANN**4 / (15.0 * PLANCK**3 * SPEED_OF_LIGHT**2)
STEFAN_BOLTZMANN_TABULATED = 5.670374419e-8

__all__ = ["SPEED_OF_LIGHT", "PLANCK", "HBAR", "BOLTZMANN", "STEFAN_BOLTZMANN", "STEFAN_BOLTZMANN_TABULATED"]
