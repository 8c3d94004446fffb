"""Scenario drivers behind the command line: validate, phase, collide, scan, paper-repro.

Each driver returns plain data. Printing, files and exit codes belong to ``cli``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import collision
from .config import PAPER_DEFAULTS, UNITS, RunConfig, build_medium
from .eit import FeasibilityReport, derive_eit, feasibility, fidelity, medium_dict
from .serialize import dumps_json, rows_to_csv, write_grid, write_text

# windows checked by paper-repro: (low, high), None = open
PAPER_WINDOWS = {
    "v": (3.5, 5.0),
    "fidelity": (0.95, None),
    "phi_closed": (2.4, 3.4),
}

SCAN_COLUMNS = (
    ("v", "m/s"),
    ("delta_omega", "rad/s"),
    ("phi_closed", "rad"),
    ("phi_bound", "rad"),
    ("fidelity", "1"),
    ("feasible", "bool"),
)


def paper_run_config() -> RunConfig:
    return RunConfig(medium=dict(PAPER_DEFAULTS), scenario="paper-repro")


def run_validate(run: RunConfig) -> FeasibilityReport:
    cfg = build_medium(run.medium)
    return feasibility(cfg, derive_eit(cfg), run.margin_factor)


def run_phase(run: RunConfig) -> dict:
    cfg = build_medium(run.medium)
    der = derive_eit(cfg)
    C = cfg.rydberg.interaction_constant_C
    result = collision.compare_phase(der, C, cfg.w, cfg.L)
    report = feasibility(cfg, der, run.margin_factor)
    return {
        "v": der.v,
        "sin2_theta": der.sin2_theta,
        "interaction_constant_C": C,
        "phi_closed": result.phi_closed,
        "phi_quadrature": result.phi_quadrature,
        "rel_difference": result.rel_difference,
        "phi_bound": collision.phase_bound(der, cfg),
        "fidelity": fidelity(cfg, der),
        "feasible": report.overall_pass,
    }


def run_collide(run: RunConfig, out_dir) -> dict:
    """Evolve the default envelopes to t_out and write the grid and plot-data files.

    Files written to ``out_dir``: grid.csv and grid.json (two-particle
    amplitude), potential_1d.csv (reduced potential over [-4, 4]),
    phase_profile.csv (reduced phase against tau = vt/w) and summary.json.
    """
    cfg = build_medium(run.medium)
    der = derive_eit(cfg)
    C = cfg.rydberg.interaction_constant_C
    env1, env2 = collision.default_envelopes(cfg, der)
    grid = collision.evolve_two_particle(env1, env2, der.t_out, der, C, cfg.w,
                                         grid_points=run.grid_points)
    zero_phase = not np.any(np.angle(grid.amplitude))
    homogeneity = collision.homogeneity_metric(grid)
    sigma = collision.schmidt_spectrum(grid)
    report = feasibility(cfg, der, run.margin_factor)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = medium_dict(cfg)
    params.update(v=der.v, t_out=der.t_out, sigma_z=env1.sigma_z,
                  center_1=env1.center_z0, center_2=env2.center_z0)
    write_grid(grid, out / "grid.csv", out / "grid.json", params)

    zeta, g = collision.potential_curve()
    write_text(out / "potential_1d.csv",
               rows_to_csv(["zeta", "delta_over_2C_w3"], zip(zeta, g)))
    tau, phi = collision.phase_profile(der, cfg.w, cfg.L)
    write_text(out / "phase_profile.csv",
               rows_to_csv(["tau", "phi_over_2C_vw2"], zip(tau, phi)))

    summary = {
        "time": der.t_out,
        "homogeneity": homogeneity,
        "zero_phase": bool(zero_phase),
        "schmidt_number": collision.schmidt_number(sigma),
        "schmidt_spectrum": [float(s) for s in sigma[:16]],
        "phi_closed": collision.closed_form_phase(der, C, cfg.w),
        "phase_profile_final": float(phi[-1]),
        "feasible": report.overall_pass,
    }
    write_text(out / "summary.json", dumps_json(summary))
    return summary


@dataclass
class ScanRow:
    value: float
    v: float = math.nan
    delta_omega: float = math.nan
    phi_closed: float = math.nan
    phi_bound: float = math.nan
    fidelity: float = math.nan
    feasible: bool = False
    homogeneity: float | None = None
    error: str = ""

    def as_dict(self, field_name: str, with_homogeneity: bool) -> dict:
        d = {field_name: self.value}
        d.update((name, getattr(self, name)) for name, _ in SCAN_COLUMNS)
        if with_homogeneity:
            d["homogeneity"] = self.homogeneity
        d["error"] = self.error
        return d


def _scan_medium(base: dict, name: str, value: float) -> dict:
    values = dict(base)
    if name in ("n", "q"):
        value = int(round(value))
        # q tracks n when the base config uses the maximal-dipole state q = n - 1
        if name == "n" and base["q"] == base["n"] - 1:
            values["q"] = value - 1
    values[name] = value
    return values


def scan_step(run: RunConfig, value: float, with_homogeneity: bool = False) -> ScanRow:
    axis = run.scan_axis
    medium = _scan_medium(run.medium, axis.field, value)
    row = ScanRow(value=medium[axis.field])
    try:
        cfg = build_medium(medium)
        der = derive_eit(cfg)
    except ValueError as exc:
        row.error = str(exc)
        return row
    C = cfg.rydberg.interaction_constant_C
    row.v = der.v
    row.delta_omega = der.delta_omega
    row.phi_closed = collision.closed_form_phase(der, C, cfg.w)
    row.phi_bound = collision.phase_bound(der, cfg)
    row.fidelity = fidelity(cfg, der)
    row.feasible = feasibility(cfg, der, run.margin_factor).overall_pass
    if with_homogeneity:
        try:
            env1, env2 = collision.default_envelopes(cfg, der)
            grid = collision.evolve_two_particle(env1, env2, der.t_out, der, C, cfg.w,
                                                 grid_points=run.grid_points)
            row.homogeneity = collision.homogeneity_metric(grid)
        except ValueError as exc:
            row.error = str(exc)
    return row


def run_scan(run: RunConfig, with_homogeneity: bool = False) -> list[ScanRow]:
    """One row per axis value, in axis order. Failing steps become flagged rows."""
    if run.scan_axis is None:
        raise ValueError("scan requires a scan axis")
    return [scan_step(run, float(v), with_homogeneity) for v in run.scan_axis.values()]


def scan_table(run: RunConfig, rows: list[ScanRow], with_homogeneity: bool = False):
    name = run.scan_axis.field
    header = [f"{name}[{UNITS[name]}]"] + [f"{c}[{u}]" for c, u in SCAN_COLUMNS]
    if with_homogeneity:
        header.append("homogeneity[1]")
    header.append("error")
    body = []
    for r in rows:
        line = [r.value] + [getattr(r, c) for c, _ in SCAN_COLUMNS]
        if with_homogeneity:
            line.append(r.homogeneity)
        line.append(r.error)
        body.append(line)
    return header, body


def run_paper_repro(run: RunConfig | None = None) -> dict:
    """Worked example: group velocity, phases, bound, fidelity, feasibility and homogeneity."""
    run = run or paper_run_config()
    cfg = build_medium(run.medium)
    der = derive_eit(cfg)
    C = cfg.rydberg.interaction_constant_C
    phase = collision.compare_phase(der, C, cfg.w, cfg.L)
    report = feasibility(cfg, der, run.margin_factor)
    env1, env2 = collision.default_envelopes(cfg, der)
    grid = collision.evolve_two_particle(env1, env2, der.t_out, der, C, cfg.w,
                                         grid_points=run.grid_points)
    values = {
        "v": der.v,
        "kappa0": der.kappa0,
        "optical_depth": der.kappa0 * cfg.L,
        "delta_omega": der.delta_omega,
        "dipole_moment": cfg.rydberg.dipole_moment,
        "interaction_constant_C": C,
        "phi_closed": phase.phi_closed,
        "phi_quadrature": phase.phi_quadrature,
        "phi_bound": collision.phase_bound(der, cfg),
        "fidelity": fidelity(cfg, der),
        "homogeneity": collision.homogeneity_metric(grid),
    }
    windows = {}
    for key, (lo, hi) in PAPER_WINDOWS.items():
        x = values[key]
        ok = (lo is None or x >= lo) and (hi is None or x <= hi)
        windows[key] = {"value": x, "low": lo, "high": hi, "pass": ok}
    return {
        "medium": medium_dict(cfg),
        "values": values,
        "windows": windows,
        "feasibility": report.as_dict(),
        "overall_pass": report.overall_pass and all(w["pass"] for w in windows.values()),
    }
