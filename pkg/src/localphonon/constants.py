"""Physical constants (CODATA 2018) used throughout the package."""

import math

ELEMENTARY_CHARGE = 1.602176634e-19  # C, exact
VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
ELECTRON_MASS = 9.1093837015e-31  # kg

# 40Ca atomic mass 39.962590863 u; the singly charged ion lacks one electron.
CA40_ION_MASS = 39.962590863 * ATOMIC_MASS_UNIT - ELECTRON_MASS

COULOMB_CONSTANT = ELEMENTARY_CHARGE**2 / (4.0 * math.pi * VACUUM_PERMITTIVITY)
"""e^2 / (4 pi eps0) in J m."""

TWO_PI = 2.0 * math.pi
