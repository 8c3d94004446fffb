"""CODATA 2018 values (SI). Exact constants are marked."""

SPEED_OF_LIGHT = 299792458.0  # m/s, exact
ELEMENTARY_CHARGE = 1.602176634e-19  # C, exact
HBAR = 1.054571817e-34  # J s, exact (h / 2 pi truncated to CODATA digits)
VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m
BOHR_RADIUS = 5.29177210903e-11  # m
