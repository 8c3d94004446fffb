"""Flat ``key = value`` run configuration.

Medium keys (all SI):

    rho       atomic density            1/m^3
    L         medium length             m
    lambda    probe wavelength          m
    gamma_ge  optical coherence decay   1/s
    Omega     drive Rabi frequency      rad/s
    w         Gaussian beam width       m
    T         pulse duration (optional) s
    n, q      Rydberg quantum numbers   -
    gamma_d   Rydberg decay rate        1/s

Optional run keys: ``margin_factor``, ``grid_points``, ``scan``
(FIELD:MIN:MAX:STEPS[:log]), ``format`` (csv|json) and ``out``. Blank lines
and ``#`` comments are ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .eit import DEFAULT_MARGIN_FACTOR, MediumConfig
from .rydberg import make_rydberg

MEDIUM_KEYS = ("rho", "L", "lambda", "gamma_ge", "Omega", "w", "T", "n", "q", "gamma_d")
REQUIRED_KEYS = ("rho", "L", "lambda", "gamma_ge", "Omega", "w", "n", "q", "gamma_d")
RUN_KEYS = ("margin_factor", "grid_points", "scan", "format", "out")
INTEGER_KEYS = ("n", "q")
UNITS = {
    "rho": "1/m^3", "L": "m", "lambda": "m", "gamma_ge": "1/s", "Omega": "rad/s",
    "w": "m", "T": "s", "n": "1", "q": "1", "gamma_d": "1/s",
}
SCENARIOS = ("validate", "phase", "collide", "scan", "paper-repro")

PAPER_DEFAULTS = {
    "rho": 1e20,
    "L": 1e-4,
    "lambda": 5e-7,
    "gamma_ge": 1e7,
    "Omega": 1.6e7,
    "w": 3e-5,
    "n": 25,
    "q": 24,
    "gamma_d": 2e3,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScanAxis:
    field: str
    start: float
    stop: float
    steps: int
    log: bool = False

    def values(self):
        import numpy as np

        if self.log:
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class RunConfig:
    medium: dict
    scenario: str = "validate"
    scan_axis: ScanAxis | None = None
    output_format: str = "json"
    output_path: str | None = None
    margin_factor: float = DEFAULT_MARGIN_FACTOR
    grid_points: int = 512

    def with_overrides(self, **kwargs) -> "RunConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def parse_scan(text: str) -> ScanAxis:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(f"scan must be FIELD:MIN:MAX:STEPS[:log], got {text!r}")
    name = parts[0].strip()
    if name not in MEDIUM_KEYS:
        raise ConfigError(f"scan field {name!r} is not a medium key ({', '.join(MEDIUM_KEYS)})")
    try:
        start, stop = float(parts[1]), float(parts[2])
        steps = int(parts[3])
    except ValueError as exc:
        raise ConfigError(f"bad scan bounds in {text!r}: {exc}") from None
    if steps < 2:
        raise ConfigError(f"scan needs at least 2 steps, got {steps}")
    log = False
    if len(parts) == 5:
        mode = parts[4].strip().lower()
        if mode not in ("log", "lin", "linear"):
            raise ConfigError(f"scan spacing must be 'log' or 'linear', got {parts[4]!r}")
        log = mode == "log"
    if log and (start <= 0 or stop <= 0):
        raise ConfigError("log scans need positive bounds")
    return ScanAxis(name, start, stop, steps, log)


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    medium: dict = {}
    run: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        where = f"{source}:{lineno}: {key}"
        if key in MEDIUM_KEYS:
            if key in medium:
                raise ConfigError(f"{where}: duplicate key")
            medium[key] = _parse_number(value, key in INTEGER_KEYS, where)
        elif key in RUN_KEYS:
            run[key] = value
        else:
            raise ConfigError(f"{where}: unknown key")

    missing = [k for k in REQUIRED_KEYS if k not in medium]
    if missing:
        raise ConfigError(f"{source}: missing required key(s): {', '.join(missing)}")

    kwargs = {}
    if "margin_factor" in run:
        kwargs["margin_factor"] = _parse_number(run["margin_factor"], False, f"{source}: margin_factor")
    if "grid_points" in run:
        kwargs["grid_points"] = int(_parse_number(run["grid_points"], True, f"{source}: grid_points"))
    if "scan" in run:
        kwargs["scan_axis"] = parse_scan(run["scan"])
    if "format" in run:
        if run["format"] not in ("csv", "json"):
            raise ConfigError(f"{source}: format must be csv or json")
        kwargs["output_format"] = run["format"]
    if "out" in run:
        kwargs["output_path"] = run["out"]
    cfg = RunConfig(medium=medium, **kwargs)
    build_medium(cfg.medium, source)  # surface invalid values now, with the file name
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text, str(path))


def _parse_number(value: str, integer: bool, where: str):
    try:
        number = float(value)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {value!r}") from None
    if not math.isfinite(number):
        raise ConfigError(f"{where}: value must be finite")
    if integer:
        if number != int(number):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return int(number)
    return number


def build_medium(values: dict, source: str = "<config>") -> MediumConfig:
    """MediumConfig from a flat key dict; any invalid value becomes a ConfigError."""
    try:
        rydberg = make_rydberg(values["n"], values["q"], values["gamma_d"])
        return MediumConfig(
            rho=values["rho"],
            L=values["L"],
            wavelength=values["lambda"],
            gamma_ge=values["gamma_ge"],
            Omega=values["Omega"],
            w=values["w"],
            T=values.get("T"),
            rydberg=rydberg,
        )
    except KeyError as exc:
        raise ConfigError(f"{source}: missing required key {exc.args[0]}") from None
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
