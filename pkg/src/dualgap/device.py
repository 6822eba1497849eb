"""Dual-gap tunable capacitor: design, C-V tracing and design report.

The actuation electrodes sit under a gap ``E_a`` three times larger than the
capacitive gap ``E_c``. The plate moves rigidly, so the lumped actuator
displacement maps 1:1 onto the capacitive gap, and dimples stop the plate at a
residual gap before the electrodes touch.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import VACUUM_PERMITTIVITY, BeamGeometry, PlateRegion, um
from .errors import DimpleViolation, PhysicsError
from .lumped import (
    LumpedActuator,
    parallel_plate_capacitance,
    pull_in_voltage,
    solve_equilibrium,
    tuning_range,
    voltage_at_displacement,
)

# Effective spring constant of the reference device, recovered by inverting
# the pull-in formula at 12 V, 4.5 um gap and 3.2e-8 m^2 actuation area.
REFERENCE_SPRING_CONSTANT = 1.511


class GapRuleWarning(UserWarning):
    """Actuation gap differs from three times the capacitive gap."""


@dataclass(frozen=True)
class DualGapDesign:
    """Dual-gap capacitor geometry.

    ``actuation_region`` holds the combined area of all ``actuation_pads``
    (its ``length`` is the summed pad length).
    """

    capacitive_region: PlateRegion
    actuation_region: PlateRegion
    beam: BeamGeometry
    dimple_residual_gap: float
    effective_spring_constant: float
    actuation_pads: int = 2
    permittivity: float = VACUUM_PERMITTIVITY
    design_id: str = "custom"

    def __post_init__(self):
        cap, act = self.capacitive_region, self.actuation_region
        if not 0 < self.dimple_residual_gap < cap.gap:
            raise PhysicsError(
                f"dimple residual gap {self.dimple_residual_gap} must lie in (0, E_c={cap.gap})")
        if not act.gap > cap.gap:
            raise PhysicsError(
                f"actuation gap {act.gap} must exceed capacitive gap {cap.gap}")
        if self.effective_spring_constant <= 0:
            raise PhysicsError("effective_spring_constant must be > 0")
        if self.actuation_pads not in (1, 2):
            raise PhysicsError("actuation_pads must be 1 or 2")
        used = cap.length + act.length
        if used > self.beam.length * (1 + 1e-12):
            raise PhysicsError(
                f"electrodes ({used} m) do not fit on a {self.beam.length} m beam")
        if not math.isclose(act.gap, 3 * cap.gap, rel_tol=1e-9):
            warnings.warn(
                f"actuation gap {act.gap:.4g} m is not 3x the capacitive gap {cap.gap:.4g} m",
                GapRuleWarning, stacklevel=3)

    @property
    def contact_displacement(self):
        return self.capacitive_region.gap - self.dimple_residual_gap

    def layout(self):
        """Electrode spans along the beam, in m from the left anchor.

        Pads sit against the anchors, the capacitive plate is centered, and
        the remaining length is split evenly into isolation gaps.
        """
        L = self.beam.length
        cap_len = self.capacitive_region.length
        pad_len = self.actuation_region.length / self.actuation_pads
        cap_span = (0.5 * (L - cap_len), 0.5 * (L + cap_len))
        pads = [(0.0, pad_len)]
        if self.actuation_pads == 2:
            pads.append((L - pad_len, L))
        return {"capacitive": cap_span, "actuation": pads}


@dataclass(frozen=True)
class EquilibriumPoint:
    voltage: float
    displacement: float
    capacitance: float
    stable: bool
    dimple_contact: bool


@dataclass(frozen=True)
class CVCurve:
    points: tuple
    design_id: str
    sweep_spec: dict = field(default_factory=dict)

    @property
    def voltages(self):
        return np.array([p.voltage for p in self.points])

    @property
    def capacitances(self):
        return np.array([p.capacitance for p in self.points])

    @property
    def displacements(self):
        return np.array([p.displacement for p in self.points])


@dataclass(frozen=True)
class DesignReport:
    c_zero: float
    c_max: float
    tuning_range: float
    pull_in_voltage: float
    dimple_contact_voltage: float
    pull_in_margin: float


def reference_design(actuation_gap=um(4.5)):
    """Reference device: 250x80 um capacitive plate at 1.5 um, two 200x80 um
    actuation pads, 800x80 um beam, 0.1 um dimples."""
    return DualGapDesign(
        capacitive_region=PlateRegion(um(250), um(80), um(1.5)),
        actuation_region=PlateRegion(um(400), um(80), actuation_gap),
        beam=BeamGeometry(um(800), um(80), um(2)),
        dimple_residual_gap=um(0.1),
        effective_spring_constant=REFERENCE_SPRING_CONSTANT,
        design_id="paper-device",
    )


def displacement_to_capacitance(design, x):
    if x > design.contact_displacement * (1 + 1e-12):
        raise DimpleViolation(
            f"displacement {x} beyond dimple stop {design.contact_displacement}")
    if x < 0:
        raise ValueError("displacement must be >= 0")
    cap = design.capacitive_region
    return parallel_plate_capacitance(cap.area, cap.gap - x, design.permittivity)


def actuator_of(design):
    act = design.actuation_region
    return LumpedActuator(
        spring_constant=design.effective_spring_constant,
        gap=act.gap,
        actuation_area=act.area,
        permittivity=design.permittivity,
    )


def dimple_contact_voltage(design):
    """Bias at which the plate lands on the dimples.

    When the dimple stop lies beyond the fold, contact happens by pull-in.
    """
    actuator = actuator_of(design)
    x_c = design.contact_displacement
    if x_c < actuator.gap / 3:
        return voltage_at_displacement(actuator, x_c)
    return pull_in_voltage(actuator)


def _voltage_grid(v_stop, n_points, v_pi, refine):
    grid = np.linspace(0.0, v_stop, n_points)
    if refine and v_stop >= 0.95 * v_pi:
        # x(V) has a square-root singularity at the fold
        tail = v_pi - (v_pi - 0.95 * v_pi) * np.geomspace(1.0, 1e-6, 12)
        grid = np.union1d(grid, tail[tail < v_stop])
        grid = np.union1d(grid, [v_stop])
    return grid


def trace_cv_curve(design, v_max, n_points):
    """Quasi-static up-sweep from 0 to ``v_max``.

    Past the dimple contact voltage the displacement stays clamped and points
    are still emitted. If the fold comes first, the curve stops at the
    pull-in voltage with a final unstable point.
    """
    if v_max < 0:
        raise ValueError("v_max must be >= 0")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    actuator = actuator_of(design)
    v_pi = pull_in_voltage(actuator)
    x_contact = design.contact_displacement
    contact_first = x_contact < actuator.gap / 3
    v_contact = dimple_contact_voltage(design)

    if contact_first:
        grid = _voltage_grid(v_max, n_points, v_pi, refine=False)
    else:
        v_stop = min(v_max, v_pi)
        grid = _voltage_grid(v_stop, n_points, v_pi, refine=v_max >= 0.95 * v_pi)

    points = []
    for v in grid:
        v = float(v)
        if contact_first and v >= v_contact:
            x, stable, contact = x_contact, True, True
        else:
            res = solve_equilibrium(actuator, min(v, v_pi))
            x, stable, contact = res.displacement, res.stable, False
            if x >= x_contact:
                x, contact = x_contact, True
        points.append(EquilibriumPoint(v, x, displacement_to_capacitance(design, x),
                                       stable, contact))
    if not contact_first and v_max >= v_pi and points[-1].stable:
        last = points[-1]
        points[-1] = EquilibriumPoint(last.voltage, last.displacement, last.capacitance,
                                      False, last.dimple_contact)
    return CVCurve(
        points=tuple(points),
        design_id=design.design_id,
        sweep_spec={"v_start": 0.0, "v_stop": float(grid[-1]), "n_points": n_points,
                    "adaptive": len(grid) != n_points},
    )


def evaluate_design(design):
    actuator = actuator_of(design)
    c_zero = displacement_to_capacitance(design, 0.0)
    c_max = displacement_to_capacitance(design, design.contact_displacement)
    return DesignReport(
        c_zero=c_zero,
        c_max=c_max,
        tuning_range=tuning_range(c_zero, c_max),
        pull_in_voltage=pull_in_voltage(actuator),
        dimple_contact_voltage=dimple_contact_voltage(design),
        pull_in_margin=actuator.gap / 3 - design.contact_displacement,
    )
