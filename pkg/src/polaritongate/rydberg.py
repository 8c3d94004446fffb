"""Permanent dipole moments of Stark-mixed Rydberg states."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import BOHR_RADIUS, ELEMENTARY_CHARGE, HBAR, VACUUM_PERMITTIVITY


class InvalidQuantumNumberError(ValueError):
    pass


@dataclass(frozen=True)
class RydbergSpec:
    """Rydberg level shared by both polariton arms.

    ``n`` is the effective principal quantum number and ``q = n1 - n2`` the
    parabolic one. ``dipole_moment`` is in C m and ``interaction_constant_C``
    in m^3 rad/s. ``gamma_d`` is the Rydberg decay rate in 1/s.
    """

    n: int
    q: int
    gamma_d: float
    dipole_moment: float
    interaction_constant_C: float


def dipole_moment(n: int, q: int) -> float:
    """Permanent dipole 3/2 n q e a0 in C m."""
    return 1.5 * n * q * ELEMENTARY_CHARGE * BOHR_RADIUS


def interaction_constant(p: float) -> float:
    """C = p^2 / (4 pi eps0 hbar) for two equal dipoles, in m^3 rad/s."""
    return p * p / (4.0 * math.pi * VACUUM_PERMITTIVITY * HBAR)


def make_rydberg(n: int, q: int, gamma_d: float) -> RydbergSpec:
    if int(n) != n or int(q) != q:
        raise InvalidQuantumNumberError(f"quantum numbers must be integers, got n={n}, q={q}")
    n, q = int(n), int(q)
    if n < 1:
        raise InvalidQuantumNumberError(f"n must be >= 1, got {n}")
    if abs(q) > n - 1:
        raise InvalidQuantumNumberError(f"|q| must be <= n-1 = {n - 1}, got q={q}")
    if not math.isfinite(gamma_d) or gamma_d < 0:
        raise ValueError(f"gamma_d must be finite and >= 0, got {gamma_d}")
    p = dipole_moment(n, q)
    # the sign of q only flips the dipole direction; C involves p^2
    return RydbergSpec(n=n, q=q, gamma_d=float(gamma_d), dipole_moment=p,
                       interaction_constant_C=interaction_constant(p))
