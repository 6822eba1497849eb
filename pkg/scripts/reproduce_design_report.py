"""Capacitances, tuning range and pull-in voltages of the reference device.

    python scripts/reproduce_design_report.py
"""
import warnings

from dualgap.core import to_pF, um
from dualgap.device import actuator_of, evaluate_design, reference_design
from dualgap.lumped import pull_in_voltage, tuning_range


def main():
    design = reference_design()
    r = evaluate_design(design)
    print(f"C0                    {to_pF(r.c_zero):.5f} pF")
    print(f"Cmax                  {to_pF(r.c_max):.4f} pF")
    print(f"TR exact              {r.tuning_range:.1f} %")
    print(f"TR from 0.12/1.77 pF  {tuning_range(0.12, 1.77):.1f} %")
    print(f"V_PI                  {r.pull_in_voltage:.3f} V")
    print(f"dimple contact        {r.dimple_contact_voltage:.3f} V")
    print(f"pull-in margin        {r.pull_in_margin / um(1):.3f} um")
    print()
    print("actuation gap sweep (k fixed)")
    warnings.simplefilter("ignore")  # gaps other than 3 x E_c trip the design-rule warning
    for gap in (3.0, 4.5, 6.0, 7.0, 8.2):
        v = pull_in_voltage(actuator_of(reference_design(actuation_gap=um(gap))))
        print(f"  E_a = {gap:4.1f} um   V_PI = {v:6.2f} V")


if __name__ == "__main__":
    main()
