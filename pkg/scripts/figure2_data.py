"""Write the reduced potential g(zeta) and the reduced phase phi(tau) as CSV.

The phase curve is computed for the given L/w; with the default 3.33 it
saturates near 0.96 rather than 1 because of the finite medium.
"""

import argparse
from pathlib import Path

from polaritongate.collision import phase_profile, potential_curve
from polaritongate.config import PAPER_DEFAULTS, build_medium
from polaritongate.eit import derive_eit
from polaritongate.serialize import rows_to_csv, write_text


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--length-ratio", type=float, default=PAPER_DEFAULTS["L"] / PAPER_DEFAULTS["w"],
                        help="L/w for the phase curve")
    parser.add_argument("--out", type=Path, default=Path("figure2"))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    zeta, g = potential_curve()
    write_text(args.out / "fig2a_potential.csv", rows_to_csv(["zeta", "delta_over_2C_w3"], zip(zeta, g)))

    values = dict(PAPER_DEFAULTS, L=args.length_ratio * PAPER_DEFAULTS["w"])
    cfg = build_medium(values)
    tau, phi = phase_profile(derive_eit(cfg), cfg.w, cfg.L)
    write_text(args.out / "fig2b_phase.csv", rows_to_csv(["tau", "phi_over_2C_vw2"], zip(tau, phi)))
    print(f"wrote {args.out}/fig2a_potential.csv and fig2b_phase.csv (final phase {phi[-1]:.5f})")


if __name__ == "__main__":
    main()
