"""Distributed (beam) vs lumped pull-in for several electrode spans.

The lumped model lumps the electrostatic load at the center with the
center-load stiffness 192EI/L^3; a distributed load on an electrode away
from the center sees a stiffer beam, so the beam model pulls in later.

    python scripts/distributed_pull_in.py
"""
from dualgap.core import BeamGeometry, Material, um
from dualgap.fem import build_mesh, distributed_pull_in_voltage, numeric_spring_constant
from dualgap.lumped import LumpedActuator, pull_in_voltage
from dualgap.profile import uniform_profile


def main():
    beam = BeamGeometry(um(800), um(80), um(2))
    mesh = build_mesh(beam, Material("SiO2", 70e9), 64)
    k = numeric_spring_constant(mesh)
    gap = uniform_profile(beam.length, um(4.5), 65)
    cases = {
        "center 250 um": [(um(275), um(525))],
        "center half": [(um(200), um(600))],
        "full beam": [(0.0, um(800))],
        "two 200 um pads": [(0.0, um(200)), (um(600), um(800))],
    }
    print(f"k = 192EI/L^3 = {k:.4f} N/m, uniform 4.5 um gap")
    for name, spans in cases.items():
        area = sum(b - a for a, b in spans) * beam.width
        lumped = pull_in_voltage(LumpedActuator(k, um(4.5), area))
        v = distributed_pull_in_voltage(mesh, gap, spans, 4 * lumped)
        print(f"{name:>16s}: lumped {lumped:6.2f} V  beam {v:6.2f} V  ({v / lumped - 1:+.1%})")


if __name__ == "__main__":
    main()
