"""
Physical constants (CODATA values from scipy.constants).

Every cross-check in the package (Lamb-Dicke parameters, coupling strengths,
closed-form mode splittings) reads its constants from here.
"""

import math

from scipy import constants as _sc

HBAR = _sc.hbar
ELEMENTARY_CHARGE = _sc.elementary_charge
EPSILON_0 = _sc.epsilon_0
ATOMIC_MASS_UNIT = _sc.atomic_mass
COULOMB_CONSTANT = 1.0 / (4.0 * math.pi * EPSILON_0)

MICRON = 1e-6
NANOMETER = 1e-9
MICROSECOND = 1e-6
MEGAHERTZ = 1e6

# Default addressing wavelength for 40Ca+ (S1/2 -> P3/2)
DEFAULT_LASER_WAVELENGTH_NM = 393.0


def angular_frequency(freq_mhz: float) -> float:
    """Convert an ordinary frequency in MHz into rad/s."""
    return 2.0 * math.pi * freq_mhz * MEGAHERTZ


def wavevector(wavelength_nm: float) -> float:
    """Wave number 2*pi/lambda in 1/m for a wavelength given in nm."""
    return 2.0 * math.pi / (wavelength_nm * NANOMETER)
