"""Phenomenological reflow profile of the resist sacrificial layer.

A patterned novolak motif heated past ~117 C grows a ridge on each edge; the
ridges stop growing around 335 C. Narrow motifs (relative to a thickness
dependent transition width) stay planar because the two ridges merge. The
shapes here are closed-form raised cosines with a handful of knobs in
:class:`ProfileParams`; nothing is volume conserving.
"""
from dataclasses import dataclass

import numpy as np

from .core import UM
from .errors import PhysicsError, WrongLayerCount
from .io import read_columns, write_csv

AMBIENT_TEMPERATURE = 20.0
MIN_SAMPLES = 16


class HeightProfile:
    """Uniformly sampled surface height h(x) (or a gap profile).

    Gap profiles may go negative when a membrane would penetrate the
    substrate; pass ``allow_negative=True`` for those.
    """

    def __init__(self, x, h, allow_negative=False):
        x = np.array(x, dtype=float)
        h = np.array(h, dtype=float)
        if x.ndim != 1 or x.shape != h.shape:
            raise ValueError("x and h must be 1-D arrays of equal length")
        if len(x) < MIN_SAMPLES:
            raise ValueError(f"need at least {MIN_SAMPLES} samples, got {len(x)}")
        dx = np.diff(x)
        if np.any(dx <= 0):
            raise ValueError("x must be strictly increasing")
        if np.max(np.abs(dx - dx.mean())) > 1e-6 * dx.mean():
            raise ValueError("x must be uniformly spaced")
        if not allow_negative and np.any(h < 0):
            raise ValueError("heights must be >= 0")
        x.setflags(write=False)
        h.setflags(write=False)
        self.x = x
        self.h = h

    @property
    def span(self):
        return float(self.x[-1] - self.x[0])

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.h.tolist()))

    def at(self, positions):
        return np.interp(positions, self.x, self.h)

    def center_height(self):
        return float(self.at(self.x[0] + 0.5 * self.span))

    def __repr__(self):
        return f"HeightProfile(n={len(self.x)}, span={self.span:.4g} m, max={self.h.max():.4g} m)"

    def to_csv(self, path, header=("x_um", "h_um")):
        return write_csv(path, header, zip(self.x / UM, self.h / UM))

    @classmethod
    def from_csv(cls, path, allow_negative=False):
        _, (x, h) = read_columns(path, 2)
        return cls(np.array(x) * UM, np.array(h) * UM, allow_negative=allow_negative)


@dataclass(frozen=True)
class ResistStack:
    layer_thicknesses: tuple
    motif_width: float
    cavity_depth: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "layer_thicknesses", tuple(self.layer_thicknesses))
        if not self.layer_thicknesses or any(t <= 0 for t in self.layer_thicknesses):
            raise PhysicsError("layer thicknesses must be > 0")
        if self.motif_width <= 0:
            raise PhysicsError("motif width must be > 0")
        if self.cavity_depth < 0:
            raise PhysicsError("cavity depth must be >= 0")

    @property
    def on_cavity(self):
        return self.cavity_depth > 0

    @property
    def total_thickness(self):
        return sum(self.layer_thicknesses)


@dataclass(frozen=True)
class ThermalCycle:
    peak_temperature: float
    onset_temperature: float = 117.5
    saturation_temperature: float = 335.0

    def __post_init__(self):
        if not self.onset_temperature < self.saturation_temperature:
            raise PhysicsError("onset temperature must be below saturation temperature")
        if self.peak_temperature < AMBIENT_TEMPERATURE:
            raise PhysicsError("peak temperature below ambient")


@dataclass(frozen=True)
class ProfileParams:
    peak_width_fraction: float = 0.08
    merge_coefficient: float = 50.0
    cavity_merge_multiplier: float = 1.5
    max_peak_height_fraction: float = 0.35

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise PhysicsError(f"{name} must be > 0")


def peak_growth_factor(cycle):
    """Piecewise-linear ridge growth between onset and saturation, in [0, 1]."""
    span = cycle.saturation_temperature - cycle.onset_temperature
    return min(max((cycle.peak_temperature - cycle.onset_temperature) / span, 0.0), 1.0)


def _merge_width(thickness, motif_on_cavity, params):
    width = params.merge_coefficient * thickness
    return width * params.cavity_merge_multiplier if motif_on_cavity else width


def merge_transition_width(stack, params):
    return _merge_width(stack.total_thickness, stack.on_cavity, params)


def _ridge_height(thickness, motif_width, merge_width, growth, params):
    # ridges emerge as the motif outgrows the merge width and saturate for
    # motifs much wider than it
    if motif_width <= merge_width or growth <= 0:
        return 0.0
    return growth * params.max_peak_height_fraction * thickness * (1.0 - merge_width / motif_width)


def _taper(motif_width, params):
    return 0.5 * params.peak_width_fraction * motif_width


def _grid(motif_width, params, n_samples):
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}")
    # j intervals across the motif put both edges (the ridge crests) on
    # samples; the m intervals either side cover at least the taper
    intervals = n_samples - 1
    j = int(intervals / (1.0 + params.peak_width_fraction))
    if (intervals - j) % 2:
        j -= 1
    if j < 1:
        raise ValueError("n_samples too small to resolve the motif and its taper")
    dx = motif_width / j
    i = np.arange(n_samples)
    x = i * dx
    # distance from the motif center, computed symmetrically
    u = np.abs(i - 0.5 * (n_samples - 1)) * dx
    return x, u


def _relief(u, motif_width, plateau, ridge, taper):
    """Plateau with raised-cosine ridges centered on the motif edges.

    Inside, each ridge decays over min(taper, W/2) toward the center; outside,
    the edge height tapers to zero over ``taper``. Slopes vanish at the edge,
    so each edge is a smooth local maximum when ridge > 0.
    """
    half = 0.5 * motif_width
    s = min(taper, half)
    d_in = half - u
    d_out = u - half
    inside = plateau + np.where(d_in < s, ridge * 0.5 * (1 + np.cos(np.pi * np.clip(d_in / s, 0, 1))), 0.0)
    outside = np.where(d_out < taper,
                       (plateau + ridge) * 0.5 * (1 + np.cos(np.pi * np.clip(d_out / taper, 0, 1))),
                       0.0)
    return np.where(u <= half, inside, outside)


def reflow_profile(stack, cycle, params=ProfileParams(), n_samples=401):
    """Resist top surface after a thermal cycle, relative to the motif floor.

    On a cavity the resist first fills it, so the plateau sits at
    ``cavity_depth + thickness``; outside the motif and its taper there is no
    resist and h = 0.
    """
    W = stack.motif_width
    x, u = _grid(W, params, n_samples)
    thickness = stack.total_thickness
    ridge = _ridge_height(thickness, W, merge_transition_width(stack, params),
                          peak_growth_factor(cycle), params)
    h = _relief(u, W, stack.cavity_depth + thickness, ridge, _taper(W, params))
    return HeightProfile(x, h)


def count_local_maxima(profile):
    """Number of strict interior peaks; flat plateaus do not count."""
    h = profile.h
    return int(np.count_nonzero((h[1:-1] > h[:-2]) & (h[1:-1] > h[2:])))


def peak_center_height_delta(profile):
    return max(float(profile.h.max()) - profile.center_height(), 0.0)


def tri_layer_process(motif_width, cavity_depth, layer_specs, params=ProfileParams(),
                      n_samples=401):
    """Three-coat sacrificial process over a cavity.

    Layer 1 fills the cavity and is plasma-trimmed flush with its rim (ideal
    planarization). Layers 2 and 3 are each patterned and reflowed, adding
    their relief on top. Heights are relative to the cavity floor, i.e. the
    fixed-electrode plane; outside the motif the surface is the rim.

    ``layer_specs`` is three ``(thickness, ThermalCycle)`` pairs; the second
    and third thickness may be zero.
    """
    if len(layer_specs) != 3:
        raise WrongLayerCount(f"tri-layer process needs 3 layers, got {len(layer_specs)}")
    if cavity_depth <= 0:
        raise PhysicsError("tri-layer process requires a cavity (depth > 0)")
    (t1, _), *upper = layer_specs
    if t1 < cavity_depth:
        raise PhysicsError(f"first layer ({t1} m) does not fill the {cavity_depth} m cavity")
    if any(t < 0 for t, _ in upper):
        raise PhysicsError("layer thickness must be >= 0")
    W = motif_width
    x, u = _grid(W, params, n_samples)
    taper = _taper(W, params)
    h = np.full_like(x, float(cavity_depth))
    for thickness, cycle in upper:
        if thickness == 0:
            continue
        ridge = _ridge_height(thickness, W, _merge_width(thickness, True, params),
                              peak_growth_factor(cycle), params)
        h = h + _relief(u, W, thickness, ridge, taper)
    return HeightProfile(x, h)


def uniform_profile(span, height, n_samples=MIN_SAMPLES):
    """Flat profile, handy as a uniform initial gap."""
    return HeightProfile(np.linspace(0.0, span, n_samples), np.full(n_samples, float(height)))

