"""Worked example: cold alkali vapour, n=25 Rydberg states, 100 um medium, 30 um beams."""

import argparse

from polaritongate.harness import paper_run_config, run_paper_repro


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=512)
    args = parser.parse_args()

    doc = run_paper_repro(paper_run_config().with_overrides(grid_points=args.grid))
    for key, value in doc["values"].items():
        print(f"{key:<24}{value:.6g}")
    print()
    for check in doc["feasibility"]["checks"]:
        print(f"{check['name']:<24}margin {check['margin_ratio']:.4g}  {'PASS' if check['pass'] else 'FAIL'}")
    print(f"\nall windows and checks: {'PASS' if doc['overall_pass'] else 'FAIL'}")


if __name__ == "__main__":
    main()
