"""Maxima count and peak-center delta across motif width and temperature.

    python scripts/profile_phenomenology.py
"""
from dualgap.core import to_um, um
from dualgap.profile import (
    ProfileParams,
    ResistStack,
    ThermalCycle,
    count_local_maxima,
    merge_transition_width,
    peak_center_height_delta,
    reflow_profile,
    tri_layer_process,
)


def main():
    p = ProfileParams()
    temps = (90, 120, 200, 280, 350)
    print("3 um flat resist; maxima count / delta (um)")
    print("width um " + "".join(f"{t:>12d}C" for t in temps))
    for w in (100, 150, 200, 300, 600, 1000):
        stack = ResistStack((um(3),), um(w))
        cells = []
        for t in temps:
            prof = reflow_profile(stack, ThermalCycle(t), p)
            cells.append(f"{count_local_maxima(prof)} / {to_um(peak_center_height_delta(prof)):.3f}")
        print(f"{w:8d} " + "".join(f"{c:>13s}" for c in cells))
    print(f"merge width: flat {to_um(merge_transition_width(ResistStack((um(3),), um(600)), p)):.0f} um, "
          f"on 4.5 um cavity {to_um(merge_transition_width(ResistStack((um(3),), um(600), um(4.5)), p)):.0f} um")
    print()
    c = ThermalCycle(350)
    for w in (520, 820):
        prof = tri_layer_process(um(w), um(4.5), [(um(5), c), (um(3), c), (um(1), c)], p)
        print(f"tri-layer on cavity, {w} um motif: delta {to_um(peak_center_height_delta(prof)):.3f} um")


if __name__ == "__main__":
    main()
