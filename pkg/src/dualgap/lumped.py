"""Lumped parallel-plate electromechanics.

A single-degree-of-freedom actuator: linear spring ``k`` against the
electrostatic attraction of a plate of area ``S`` across a gap ``d``. The
static balance is

    k x = eps S V^2 / (2 (d - x)^2)

and the stable branch ends at the fold x = d/3.
"""
import math
from dataclasses import dataclass

import numpy as np

from .core import VACUUM_PERMITTIVITY
from .errors import GapClosed, NoConvergence, NonPositiveCapacitance, NonPositiveGap, PullIn

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LumpedActuator:
    spring_constant: float
    gap: float
    actuation_area: float
    permittivity: float = VACUUM_PERMITTIVITY

    def __post_init__(self):
        for name in ("spring_constant", "gap", "actuation_area", "permittivity"):
            if not getattr(self, name) > 0:
                raise ValueError(f"actuator {name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class EquilibriumResult:
    displacement: float
    residual_force: float
    iterations: int
    stable: bool


def parallel_plate_capacitance(area, gap, permittivity=VACUUM_PERMITTIVITY):
    if gap <= 0:
        raise NonPositiveGap(f"gap must be > 0, got {gap}")
    if area <= 0:
        raise ValueError(f"area must be > 0, got {area}")
    return permittivity * area / gap


def electrostatic_force(voltage, area, gap, displacement, permittivity=VACUUM_PERMITTIVITY):
    if displacement >= gap:
        raise GapClosed(f"displacement {displacement} closes gap {gap}")
    if displacement < 0:
        raise ValueError("displacement must be >= 0")
    return permittivity * area * voltage ** 2 / (2.0 * (gap - displacement) ** 2)


def fixed_fixed_spring_constant(beam, youngs_modulus):
    """Center point-load stiffness of a clamped-clamped beam, 192 E I / L^3."""
    if youngs_modulus <= 0:
        raise ValueError("youngs_modulus must be > 0")
    return 192.0 * youngs_modulus * beam.second_moment / beam.length ** 3


def pull_in_displacement(gap):
    if gap <= 0:
        raise NonPositiveGap(f"gap must be > 0, got {gap}")
    return gap / 3.0


def pull_in_voltage(actuator):
    a = actuator
    return math.sqrt(8.0 * a.spring_constant * a.gap ** 3
                     / (27.0 * a.permittivity * a.actuation_area))


def voltage_at_displacement(actuator, x):
    """Bias that holds the plate at ``x``.

    Rises on [0, d/3] and falls beyond it; only the rising part is a stable
    equilibrium.
    """
    a = actuator
    if x >= a.gap:
        raise GapClosed(f"displacement {x} closes gap {a.gap}")
    if x < 0:
        raise ValueError("displacement must be >= 0")
    return math.sqrt(2.0 * a.spring_constant * x * (a.gap - x) ** 2
                     / (a.permittivity * a.actuation_area))


def net_force(actuator, voltage, x):
    """Spring force minus electrostatic force (positive = spring wins)."""
    a = actuator
    return a.spring_constant * x - electrostatic_force(
        voltage, a.actuation_area, a.gap, x, a.permittivity)


def _is_stable(actuator, voltage, x):
    a = actuator
    return a.spring_constant - a.permittivity * a.actuation_area * voltage ** 2 / (a.gap - x) ** 3 > 0


def solve_equilibrium(actuator, voltage, max_iter=100):
    """Stable root of k x (d - x)^2 = eps S V^2 / 2 on [0, d/3].

    Newton iteration safeguarded by the bracket [0, d/3]; a bisection step is
    taken whenever the Newton update leaves the bracket or stalls, which is
    what happens close to the fold where the slope vanishes.
    """
    if voltage < 0:
        raise ValueError("voltage must be >= 0")
    a = actuator
    k, d = a.spring_constant, a.gap
    if voltage == 0:
        return EquilibriumResult(0.0, 0.0, 0, True)

    v_pi = pull_in_voltage(a)
    if voltage > v_pi * (1.0 + 4 * _EPS):
        raise PullIn(f"{voltage:.6g} V exceeds pull-in voltage {v_pi:.6g} V")

    c = 0.5 * a.permittivity * a.actuation_area * voltage ** 2

    def g(x):
        return k * x * (d - x) ** 2 - c

    def dg(x):
        return k * (d - x) * (d - 3.0 * x)

    lo, hi = 0.0, d / 3.0
    if g(hi) <= 0.0 or abs(voltage - v_pi) <= 4 * _EPS * v_pi:
        # at the fold, to rounding
        return EquilibriumResult(hi, net_force(a, voltage, hi), 0, False)

    x = min(c / (k * d * d), 0.5 * hi)
    dx_old = hi - lo
    dx = dx_old
    gx = g(x)
    for it in range(1, max_iter + 1):
        if gx < 0:
            lo = x
        else:
            hi = x
        slope = dg(x)
        newton_ok = (slope > 0 and lo < x - gx / slope < hi
                     and abs(2.0 * gx) <= abs(dx_old * slope))
        dx_old = dx
        if newton_ok:
            dx = -gx / slope
            x_new = x + dx
        else:
            x_new = 0.5 * (lo + hi)
            dx = x_new - x
        x = x_new
        gx = g(x)
        if gx == 0.0 or abs(dx) <= 2 * _EPS * x or hi - lo <= 4 * _EPS * hi:
            return EquilibriumResult(x, net_force(a, voltage, x), it,
                                     _is_stable(a, voltage, x))
    raise NoConvergence(f"equilibrium not converged after {max_iter} iterations at {voltage} V")


def tuning_range(c_min, c_max):
    """Capacitance tuning range in percent, 100 (Cmax - Cmin) / Cmin."""
    if c_min <= 0:
        raise NonPositiveCapacitance(f"c_min must be > 0, got {c_min}")
    if c_max < c_min:
        raise ValueError("c_max must be >= c_min")
    return 100.0 * (c_max - c_min) / c_min
