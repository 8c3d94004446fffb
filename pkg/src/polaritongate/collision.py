"""Conditional phase and output two-particle amplitude for two colliding polaritons."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eit import DerivedEit, MediumConfig
from .numerics import integrate_adaptive
from .potential import reduced_potential

MASS_LOSS_TOLERANCE = 1e-6
# grid half-margin around each envelope centre, in rms widths
GRID_MARGIN_SIGMAS = 6.0
DEFAULT_GRID_POINTS = 512

FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


class EnvelopeTruncationError(ValueError):
    pass


class UndefinedMetricError(ValueError):
    pass


@dataclass(frozen=True)
class PulseEnvelope:
    """Gaussian single-excitation envelope f(z), normalised so that int |f|^2 dz = length.

    ``sigma_z`` is the rms width of |f|^2.
    """

    center_z0: float
    sigma_z: float
    length: float
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape != "gaussian":
            raise ValueError(f"unsupported envelope shape {self.shape!r}")
        if not self.sigma_z > 0 or not self.length > 0:
            raise ValueError("sigma_z and length must be positive")

    def amplitude(self, z):
        z = np.asarray(z, dtype=float)
        peak = math.sqrt(self.length / (math.sqrt(2.0 * math.pi) * self.sigma_z))
        return peak * np.exp(-((z - self.center_z0) ** 2) / (4.0 * self.sigma_z**2))

    def mass_fraction(self, a: float, b: float, shift: float = 0.0) -> float:
        """Fraction of int |f(z - shift)|^2 lying inside [a, b]."""
        c = self.center_z0 + shift
        s = self.sigma_z * math.sqrt(2.0)
        return 0.5 * (math.erf((b - c) / s) - math.erf((a - c) / s))


@dataclass(frozen=True)
class TwoParticleGrid:
    z1_grid: np.ndarray
    z2_grid: np.ndarray
    amplitude: np.ndarray
    time: float

    def __post_init__(self):
        for name in ("z1_grid", "z2_grid"):
            g = np.asarray(getattr(self, name), dtype=float)
            if g.ndim != 1 or g.size < 2:
                raise ValueError(f"{name} must be a 1D array with at least two points")
            steps = np.diff(g)
            if np.any(steps <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
                raise ValueError(f"{name} must be uniformly spaced")
        if np.shape(self.amplitude) != (len(self.z1_grid), len(self.z2_grid)):
            raise ValueError(
                f"amplitude shape {np.shape(self.amplitude)} does not match grids "
                f"({len(self.z1_grid)}, {len(self.z2_grid)})"
            )


@dataclass(frozen=True)
class PhaseResult:
    phi_closed: float
    phi_quadrature: float
    rel_difference: float


def closed_form_phase(der: DerivedEit, C: float, w: float) -> float:
    """Uniform phase 2 C sin^4(theta) / (v w^2) for an infinitely long medium."""
    return 2.0 * C * der.sin4_theta / (der.v * w**2)


def phase_bound(der: DerivedEit, cfg: MediumConfig) -> float:
    """Largest phase compatible with |Delta(0)| < delta_omega: (w/2) sqrt(kappa0 / (pi L))."""
    return 0.5 * cfg.w * math.sqrt(der.kappa0 / (math.pi * cfg.L))


def _reduced_integral(zeta_a: float, zeta_b: float, rel_tol: float, abs_tol: float) -> float:
    # integral of g over [zeta_a, zeta_b], split at the cusp
    if zeta_a == zeta_b:
        return 0.0
    lo, hi = min(zeta_a, zeta_b), max(zeta_a, zeta_b)
    value = integrate_adaptive(reduced_potential, lo, hi, rel_tol, abs_tol, points=(0.0,)).value
    return value if zeta_b > zeta_a else -value


def phase_shift(z1: float, z2: float, t: float, der: DerivedEit, C: float, w: float,
                rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> float:
    """Conditional phase phi(z1, z2, t) = -sin^4(theta) int_0^t Delta(z1 - z2 - 2v(t - t')) dt'.

    The time integral is done in the reduced separation
    zeta = (z1 - z2 - 2v(t - t')) / w. That is an affine map of t', and the
    cusp of the potential at the crossing time becomes a split at zeta = 0.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0 or C == 0:
        return 0.0
    d = z1 - z2
    zeta_b = d / w
    zeta_a = (d - 2.0 * der.v * t) / w
    reduced = _reduced_integral(zeta_a, zeta_b, rel_tol, abs_tol)
    return -der.sin4_theta * C / (der.v * w**2) * reduced


def compare_phase(der: DerivedEit, C: float, w: float, L: float,
                  rel_tol: float = 1e-12, abs_tol: float = 1e-15) -> PhaseResult:
    """Closed form against the quadrature value at (z1, z2, t) = (L, 0, L/v)."""
    closed = closed_form_phase(der, C, w)
    quad = phase_shift(L, 0.0, L / der.v, der, C, w, rel_tol, abs_tol)
    rel = abs(closed - quad) / max(abs(closed), np.finfo(float).tiny)
    return PhaseResult(closed, quad, rel)


def phase_profile(der: DerivedEit, w: float, L: float, points: int = 201,
                  rel_tol: float = 1e-10, abs_tol: float = 1e-13):
    """Phase phi(vt, L - vt, t) along the collision, in units of 2C/(v w^2).

    Returns ``(tau, phi)`` with tau = vt/w running over [0, L/w].
    """
    tau = np.linspace(0.0, L / w, points)
    X = L / w
    # in reduced units the integral runs over zeta in [-X, 2 tau - X]
    phi = np.array([-0.5 * der.sin4_theta * _reduced_integral(-X, 2.0 * ta - X, rel_tol, abs_tol)
                    for ta in tau])
    return tau, phi


def potential_curve(zeta_min: float = -4.0, zeta_max: float = 4.0, points: int = 401):
    """Reduced 1D potential Delta w^3 / (2C) sampled over [zeta_min, zeta_max]."""
    zeta = np.linspace(zeta_min, zeta_max, points)
    return zeta, reduced_potential(zeta)


def default_envelopes(cfg: MediumConfig, der: DerivedEit) -> tuple[PulseEnvelope, PulseEnvelope]:
    """Gaussians of intensity FWHM v*T centred on the two ends of the medium."""
    sigma = der.v * der.pulse_duration / FWHM_PER_SIGMA
    return (PulseEnvelope(0.0, sigma, cfg.L), PulseEnvelope(cfg.L, sigma, cfg.L))


def default_grid(env1: PulseEnvelope, env2: PulseEnvelope, der: DerivedEit, t: float,
                 points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Common uniform grid for z1 and z2 covering both envelopes at t = 0 and at ``t``."""
    shift = der.v * t
    centers = (env1.center_z0, env1.center_z0 + shift, env2.center_z0, env2.center_z0 - shift)
    margin = GRID_MARGIN_SIGMAS * max(env1.sigma_z, env2.sigma_z)
    return np.linspace(min(centers) - margin, max(centers) + margin, points)


def _separation_phases(z1: np.ndarray, z2: np.ndarray, t: float, der: DerivedEit,
                       C: float, w: float, rel_tol: float, abs_tol: float) -> np.ndarray:
    n1, n2 = len(z1), len(z2)
    if C == 0 or t == 0:
        return np.zeros((n1, n2))
    dz1 = (z1[-1] - z1[0]) / (n1 - 1)
    dz2 = (z2[-1] - z2[0]) / (n2 - 1)
    if math.isclose(dz1, dz2, rel_tol=1e-12):
        # phi depends only on z1 - z2; equal spacing leaves n1 + n2 - 1 distinct values
        k = np.arange(-(n2 - 1), n1)
        seps = (z1[0] - z2[0]) + k * dz1
        table = np.array([phase_shift(s, 0.0, t, der, C, w, rel_tol, abs_tol) for s in seps])
        i = np.arange(n1)[:, None]
        j = np.arange(n2)[None, :]
        return table[i - j + (n2 - 1)]
    seps, inverse = np.unique(z1[:, None] - z2[None, :], return_inverse=True)
    table = np.array([phase_shift(s, 0.0, t, der, C, w, rel_tol, abs_tol) for s in seps])
    return table[inverse].reshape(n1, n2)


def evolve_two_particle(env1: PulseEnvelope, env2: PulseEnvelope, t: float, der: DerivedEit,
                        C: float, w: float, z1_grid=None, z2_grid=None,
                        grid_points: int = DEFAULT_GRID_POINTS,
                        rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> TwoParticleGrid:
    """Sample F12(z1, z2, t) = f1(z1 - vt) f2(z2 + vt) exp(i phi(z1, z2, t)).

    Missing grids default to ``default_grid``. Raises EnvelopeTruncationError
    when a grid loses more than 1e-6 of either envelope's weight.
    """
    if z1_grid is None or z2_grid is None:
        common = default_grid(env1, env2, der, t, grid_points)
        z1_grid = common if z1_grid is None else z1_grid
        z2_grid = common if z2_grid is None else z2_grid
    z1 = np.asarray(z1_grid, dtype=float)
    z2 = np.asarray(z2_grid, dtype=float)
    shift = der.v * t
    for label, env, grid, sign in (("env1", env1, z1, 1.0), ("env2", env2, z2, -1.0)):
        lost = 1.0 - env.mass_fraction(grid[0], grid[-1], sign * shift)
        if lost > MASS_LOSS_TOLERANCE:
            raise EnvelopeTruncationError(
                f"{label}: grid [{grid[0]:.4e}, {grid[-1]:.4e}] m misses a fraction "
                f"{lost:.3e} of the envelope at t={t:.4e} s"
            )
    phi = _separation_phases(z1, z2, t, der, C, w, rel_tol, abs_tol)
    f1 = env1.amplitude(z1 - shift)
    f2 = env2.amplitude(z2 + shift)
    amplitude = f1[:, None] * f2[None, :] * np.exp(1j * phi)
    return TwoParticleGrid(z1, z2, amplitude, float(t))


def homogeneity_metric(grid: TwoParticleGrid) -> float:
    """Intensity-weighted spread of arg F12 relative to its weighted mean |phase|.

    Phases are unwrapped around the weighted circular mean, so a phase near pi
    does not straddle the branch cut. The mean is taken in [0, 2 pi) because the
    conditional phase is non-negative. Returns 0 for a spread of exactly zero,
    which includes the zero-phase case.
    """
    amp = np.asarray(grid.amplitude)
    weight = np.abs(amp) ** 2
    total = weight.sum()
    if not total > 0:
        raise UndefinedMetricError("amplitude is identically zero")
    angle = np.angle(amp)
    center = np.angle(np.sum(weight * np.exp(1j * angle))) % (2.0 * math.pi)
    phase = center + np.angle(np.exp(1j * (angle - center)))
    mean = np.sum(weight * phase) / total
    spread = math.sqrt(max(np.sum(weight * (phase - mean) ** 2) / total, 0.0))
    if spread == 0.0:
        return 0.0
    mean_abs = np.sum(weight * np.abs(phase)) / total
    if mean_abs == 0.0:
        raise UndefinedMetricError("weighted mean phase is zero")
    return spread / mean_abs


def schmidt_spectrum(grid: TwoParticleGrid) -> np.ndarray:
    """Singular values of F12, descending, scaled so that sum(sigma^2) = 1."""
    sigma = np.linalg.svd(np.asarray(grid.amplitude), compute_uv=False)
    norm = math.sqrt(float(np.sum(sigma**2)))
    if norm == 0:
        raise UndefinedMetricError("amplitude is identically zero")
    return sigma / norm


def schmidt_number(sigma) -> float:
    """K = 1 / sum(sigma^4) for a normalised spectrum."""
    sigma = np.asarray(sigma, dtype=float)
    return 1.0 / float(np.sum(sigma**4))
