"""Quasi-static C-V curves for a few actuation gaps, written as CSV.

    python scripts/cv_curve.py --out results/
"""
import argparse
import warnings
from pathlib import Path

from dualgap.core import to_pF, to_um, um
from dualgap.device import reference_design, trace_cv_curve
from dualgap.io import write_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--points", type=int, default=201)
    args = ap.parse_args()
    out = Path(args.out)
    for gap in (4.5, 3.9, 7.0):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            design = reference_design(actuation_gap=um(gap))
        curve = trace_cv_curve(design, 30.0, args.points)
        rows = [(p.voltage, to_um(p.displacement), to_pF(p.capacitance), p.stable, p.dimple_contact)
                for p in curve.points]
        path = write_csv(out / f"cv_Ea{gap:g}um.csv",
                         ["voltage_V", "displacement_um", "capacitance_pF", "stable", "dimple_contact"], rows)
        last = curve.points[-1]
        end = "dimple contact" if last.dimple_contact else "pull-in fold"
        print(f"E_a {gap:4.1f} um: {len(rows)} points, ends at {last.voltage:.3f} V "
              f"({end}), C = {to_pF(last.capacitance):.4f} pF -> {path}")


if __name__ == "__main__":
    main()
