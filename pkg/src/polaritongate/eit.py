"""Slow-light parameters of the driven medium and the validity checks they must satisfy."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .constants import SPEED_OF_LIGHT
from .potential import peak_shift
from .rydberg import RydbergSpec

DEFAULT_MARGIN_FACTOR = 10.0
# Tv/L used when the pulse duration is not given
DEFAULT_PULSE_FILL = 0.3

CHECK_NAMES = (
    "optical_depth",
    "pulse_bandwidth",
    "pulse_fits_medium",
    "shift_within_bandwidth",
    "rydberg_lifetime",
)


class SlowLightRegimeError(ValueError):
    """The requested drive gives a group velocity at or above c."""


@dataclass(frozen=True)
class MediumConfig:
    """Atomic ensemble and fields, all SI.

    rho [1/m^3], L [m], wavelength [m], gamma_ge [1/s], Omega [rad/s],
    w [m], T [s]. ``T=None`` picks T so that T v / L = 0.3. Both arms
    share one drive Rabi frequency, hence one mixing angle.
    """

    rho: float
    L: float
    wavelength: float
    gamma_ge: float
    Omega: float
    w: float
    rydberg: RydbergSpec
    T: float | None = None

    def __post_init__(self):
        for name in ("rho", "L", "wavelength", "gamma_ge", "Omega", "w"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value}")
        if self.T is not None and not (math.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be finite and positive, got {self.T}")


@dataclass(frozen=True)
class DerivedEit:
    kappa0: float
    sin2_theta: float
    v: float
    v_approx: float
    delta_omega: float
    t_out: float
    pulse_duration: float

    @property
    def sin4_theta(self) -> float:
        return self.sin2_theta**2


def derive_eit(cfg: MediumConfig) -> DerivedEit:
    """Absorption coefficient, group velocity, EIT bandwidth and transit time.

    The group velocity comes from the experimental estimate
    v = 2 Omega^2 / (kappa0 gamma_ge). The mixing angle is then back-derived
    from v = c cos^2(theta).
    """
    kappa0 = 3.0 * cfg.wavelength**2 * cfg.rho / (2.0 * math.pi)
    v = 2.0 * cfg.Omega**2 / (kappa0 * cfg.gamma_ge)
    if not v < SPEED_OF_LIGHT:
        raise SlowLightRegimeError(
            f"group velocity {v:.3e} m/s is not below c; the slow-light treatment does not apply"
        )
    delta_omega = cfg.Omega**2 / (cfg.gamma_ge * math.sqrt(kappa0 * cfg.L))
    t_out = cfg.L / v
    T = cfg.T if cfg.T is not None else DEFAULT_PULSE_FILL * cfg.L / v
    return DerivedEit(
        kappa0=kappa0,
        sin2_theta=1.0 - v / SPEED_OF_LIGHT,
        v=v,
        v_approx=v,
        delta_omega=delta_omega,
        t_out=t_out,
        pulse_duration=T,
    )


@dataclass(frozen=True)
class Check:
    """One inequality lhs < rhs (strict) or lhs << rhs (soft).

    ``margin_ratio`` is rhs/lhs. The check passes when it exceeds
    ``threshold``: 1 for strict checks, the margin factor for soft ones.
    """

    name: str
    relation: str
    lhs: float
    rhs: float
    margin_ratio: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin_ratio": self.margin_ratio,
            "threshold": self.threshold,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class FeasibilityReport:
    checks: tuple[Check, ...]
    overall_pass: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "overall_pass", all(c.passed for c in self.checks))

    def __getitem__(self, name: str) -> Check:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {"overall_pass": self.overall_pass, "checks": [c.as_dict() for c in self.checks]}

    def table(self) -> str:
        rows = [f"{'check':<24}{'lhs':>14} {'rel':^4}{'rhs':>14}{'margin':>12}  result"]
        for c in self.checks:
            rows.append(
                f"{c.name:<24}{c.lhs:>14.4e} {c.relation:^4}{c.rhs:>14.4e}"
                f"{c.margin_ratio:>12.4g}  {'PASS' if c.passed else 'FAIL'}"
            )
        rows.append(f"overall: {'PASS' if self.overall_pass else 'FAIL'}")
        return "\n".join(rows)


def _check(name: str, lhs: float, rhs: float, soft: bool, margin_factor: float) -> Check:
    threshold = margin_factor if soft else 1.0
    margin = rhs / lhs if lhs > 0 else math.inf
    return Check(name, "<<" if soft else "<", lhs, rhs, margin, threshold, margin > threshold)


def feasibility(cfg: MediumConfig, der: DerivedEit,
                margin_factor: float = DEFAULT_MARGIN_FACTOR) -> FeasibilityReport:
    """Evaluate the five validity conditions; infeasibility is reported, not raised."""
    optical_depth = der.kappa0 * cfg.L
    fill = der.pulse_duration * der.v / cfg.L
    checks = (
        _check("optical_depth", 1.0, optical_depth, True, margin_factor),
        _check("pulse_bandwidth", optical_depth**-0.5, fill, True, margin_factor),
        _check("pulse_fits_medium", fill, 1.0, False, margin_factor),
        _check("shift_within_bandwidth",
               peak_shift(cfg.rydberg.interaction_constant_C, cfg.w), der.delta_omega,
               False, margin_factor),
        _check("rydberg_lifetime", der.t_out * cfg.rydberg.gamma_d, 1.0, True, margin_factor),
    )
    return FeasibilityReport(checks)


def fidelity(cfg: MediumConfig, der: DerivedEit) -> float:
    """Survival probability of the Rydberg components, exp(-gamma_d L / v)."""
    return math.exp(-cfg.rydberg.gamma_d * cfg.L / der.v)


def medium_dict(cfg: MediumConfig) -> dict:
    d = asdict(cfg)
    ryd = d.pop("rydberg")
    d.update(n=ryd["n"], q=ryd["q"], gamma_d=ryd["gamma_d"])
    return d
