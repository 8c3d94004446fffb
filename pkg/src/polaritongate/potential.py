"""Dipole-dipole shifts: the bare 3D form and its Gaussian transverse average.

Lengths are SI metres. ``C`` is in m^3 rad/s, so shifts come out in rad/s.
``w`` is the Gaussian width appearing in the intensity profile
exp(-r_perp^2 / w^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import SQRT_PI, erfcx, integrate_adaptive

# Above this |zeta| the reduced potential is summed from its asymptotic
# expansion; the direct form cancels 2|zeta| against itself.
_ASYMPTOTIC_ZETA = 12.0


def _asymptotic_coefficients(count: int) -> np.ndarray:
    # g(x) = -2x * sum_{k>=2} c_k u^k, u = 1/(2x^2), c_k = (-1)^k (2k-3)!! (2k-2)
    coeffs = []
    double_fact = 1.0  # (2k-3)!! for k = 2
    for k in range(2, count + 2):
        if k > 2:
            double_fact *= 2 * k - 3
        coeffs.append((-1) ** k * double_fact * (2 * k - 2))
    return np.array(coeffs)


_ASYMPTOTIC_C = _asymptotic_coefficients(20)


class SingularSeparationError(ValueError):
    pass


@dataclass(frozen=True)
class Geometry:
    w: float
    L: float

    def __post_init__(self):
        if not (self.w > 0 and self.L > 0):
            raise ValueError(f"w and L must be positive, got w={self.w}, L={self.L}")


def dd_shift_3d(separation, theta, C: float):
    """C (1 - 3 cos^2 theta) / r^3, with theta measured from the z axis."""
    r = np.asarray(separation, dtype=float)
    if np.any(r <= 0):
        raise SingularSeparationError("dipole-dipole shift is singular at zero separation")
    out = C * (1.0 - 3.0 * np.cos(theta) ** 2) / r**3
    return float(out) if np.ndim(out) == 0 else out


def reduced_potential(zeta):
    """Transverse-averaged potential in units of 2C/w^3, as a function of zeta = s/w.

    g(zeta) = 2|zeta| - sqrt(pi) (1 + 2 zeta^2) erfcx(|zeta|). Even and
    strictly negative, with g(0) = -sqrt(pi) and g ~ -1/|zeta|^3 far out.
    """
    z = np.abs(np.asarray(zeta, dtype=float))
    if not np.all(np.isfinite(z)):
        raise ValueError("reduced_potential: zeta must be finite")
    flat = np.atleast_1d(z).ravel()
    out = np.empty_like(flat)
    near = flat < _ASYMPTOTIC_ZETA
    if near.any():
        x = flat[near]
        out[near] = 2.0 * x - SQRT_PI * (1.0 + 2.0 * x * x) * erfcx(x)
    far = ~near
    if far.any():
        x = flat[far]
        u = 1.0 / (2.0 * x * x)
        acc = np.zeros_like(x)
        for c in _ASYMPTOTIC_C[::-1]:
            acc = (acc + c) * u
        out[far] = -2.0 * x * u * acc
    if z.ndim == 0:
        return float(out[0])
    return out.reshape(z.shape)


def dd_potential_1d(s, C: float, w: float):
    """1D dipole-dipole potential (rad/s) between slices separated by ``s`` metres."""
    if not w > 0:
        raise ValueError(f"w must be positive, got {w}")
    if C < 0:
        raise ValueError(f"C must be non-negative, got {C}")
    return (2.0 * C / w**3) * reduced_potential(np.asarray(s, dtype=float) / w)


def peak_shift(C: float, w: float) -> float:
    """|Delta(0)| = 2 sqrt(pi) C / w^3."""
    return 2.0 * SQRT_PI * C / w**3


def _half_line_integrand(t):
    # zeta = t / (1 - t) maps [0, 1) onto [0, inf)
    one_minus = 1.0 - t
    return reduced_potential(t / one_minus) / one_minus**2


def reduced_potential_integral(zeta_max: float = math.inf, rel_tol: float = 1e-12,
                               abs_tol: float = 1e-14) -> float:
    """Integral of the reduced potential over [-zeta_max, zeta_max].

    Both halves are integrated separately so the cusp at zero is a breakpoint.
    The default ``zeta_max=inf`` gives the full-line value -2.
    """
    if not zeta_max > 0:
        raise ValueError(f"zeta_max must be positive, got {zeta_max}")
    if math.isinf(zeta_max):
        right = integrate_adaptive(_half_line_integrand, 0.0, 1.0, rel_tol, abs_tol).value
        left = integrate_adaptive(lambda t: _half_line_integrand(-t), -1.0, 0.0, rel_tol, abs_tol).value
    else:
        left = integrate_adaptive(reduced_potential, -zeta_max, 0.0, rel_tol, abs_tol).value
        right = integrate_adaptive(reduced_potential, 0.0, zeta_max, rel_tol, abs_tol).value
    return left + right
