"""Compositions used by the command line and the experiment scripts."""
from dataclasses import dataclass, replace

import numpy as np

from .fem import build_mesh, calibrate_stress_gradient, gap_function, release_profile
from .lumped import LumpedActuator, pull_in_voltage
from .profile import (
    ResistStack,
    count_local_maxima,
    reflow_profile,
    tri_layer_process,
)


def build_profile(spec, n_samples):
    """Sacrificial-layer profile described by a :class:`ProfileSpec`."""
    if spec.mode == "tri-layer":
        return tri_layer_process(spec.motif_width, spec.cavity_depth, list(spec.layers),
                                 spec.params, n_samples)
    stack = ResistStack(tuple(t for t, _ in spec.layers), spec.motif_width, spec.cavity_depth)
    # a single reflow sees the hottest cycle of the stack
    cycle = max((c for _, c in spec.layers), key=lambda c: c.peak_temperature)
    return reflow_profile(stack, cycle, spec.params, n_samples)


@dataclass(frozen=True)
class RegionStats:
    min_gap: float
    max_gap: float
    mean_gap: float


@dataclass(frozen=True)
class ReleaseStudy:
    release: object
    gap: object
    initial_profile: object
    stress_gradient: float
    calibrated: bool
    regions: dict
    released_pull_in_voltage: float

    @property
    def center_deflection(self):
        return self.release.center_displacement


def _stats(profile, spans):
    mask = np.zeros(len(profile.x), dtype=bool)
    for a, b in spans:
        mask |= (profile.x >= a - 1e-12) & (profile.x <= b + 1e-12)
    h = profile.h[mask]
    return RegionStats(float(h.min()), float(h.max()), float(h.mean()))


def release_study(bundle, n_elements=None, target_center=None):
    """Release the membrane over its sacrificial profile.

    The stress gradient acts on the actuation pads only. With a target center
    deflection (argument, or the design file's solver setting) the gradient
    is calibrated by bisection; otherwise the material's gradient is used.
    """
    design, material = bundle.design, bundle.material
    n = n_elements or bundle.solver.elements
    if target_center is None:
        target_center = bundle.solver.release_target_center
    layout = design.layout()
    mesh = build_mesh(design.beam, material, n)
    spans = layout["actuation"]
    if target_center is not None:
        cal = calibrate_stress_gradient(mesh, material, target_center, spans)
        release, gradient = cal.release, cal.stress_gradient
    else:
        release = release_profile(mesh, material, spans)
        gradient = material.stress_gradient
    initial = build_profile(bundle.profile, bundle.solver.profile_samples)
    gap = gap_function(release, initial)
    regions = {
        "capacitive": _stats(gap, [layout["capacitive"]]),
        "actuation": _stats(gap, spans),
    }
    actuator = LumpedActuator(design.effective_spring_constant, regions["actuation"].mean_gap,
                              design.actuation_region.area, design.permittivity)
    return ReleaseStudy(
        release=release,
        gap=gap,
        initial_profile=initial,
        stress_gradient=gradient,
        calibrated=target_center is not None,
        regions=regions,
        released_pull_in_voltage=pull_in_voltage(actuator),
    )


def profile_summary(profile):
    return {"maxima_count": count_local_maxima(profile)}


def with_material(bundle, **changes):
    return replace(bundle, material=replace(bundle.material, **changes))
