"""Clamped-clamped Euler-Bernoulli beam finite elements.

Two-node Hermite cubic elements with (w, theta) per node, DOF order
``[w0, t0, w1, t1, ...]``. Axial prestress enters through the consistent
geometric stiffness matrix. Sign convention: +w points away from the
substrate, so a negative displacement closes the gap.
"""
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import VACUUM_PERMITTIVITY
from .errors import (
    MeshMisaligned,
    NoConvergence,
    PullIn,
    SingularSystem,
    SpanMismatch,
    TooFewElements,
)
from .profile import HeightProfile

_GAUSS_XI = 0.5 + 0.5 * np.array([-math.sqrt(3 / 5), 0.0, math.sqrt(3 / 5)])
_GAUSS_W = 0.5 * np.array([5 / 9, 8 / 9, 5 / 9])


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BeamMesh:
    """Node coordinates plus per-element bending stiffness and axial force.

    Both end nodes are clamped. ``width`` converts pressures to line loads.
    """

    node_positions: np.ndarray
    EI: np.ndarray
    axial_force: np.ndarray
    width: float

    def __post_init__(self):
        x = _frozen(self.node_positions)
        EI = _frozen(self.EI)
        N = _frozen(self.axial_force)
        object.__setattr__(self, "node_positions", x)
        object.__setattr__(self, "EI", EI)
        object.__setattr__(self, "axial_force", N)
        if len(x) < 3:
            raise TooFewElements("mesh needs at least 2 elements")
        if x[0] != 0.0 or np.any(np.diff(x) <= 0):
            raise ValueError("node positions must start at 0 and strictly increase")
        if len(EI) != len(x) - 1 or len(N) != len(x) - 1:
            raise ValueError("one EI and one axial force per element")
        if np.any(EI <= 0):
            raise ValueError("every element EI must be > 0")

    @property
    def n_elements(self):
        return len(self.node_positions) - 1

    @property
    def length(self):
        return float(self.node_positions[-1])

    @property
    def n_dof(self):
        return 2 * len(self.node_positions)

    def element_lengths(self):
        return np.diff(self.node_positions)

    def element_midpoints(self):
        x = self.node_positions
        return 0.5 * (x[:-1] + x[1:])

    def with_axial_force(self, axial_force):
        N = np.broadcast_to(np.asarray(axial_force, dtype=float), self.EI.shape)
        return BeamMesh(self.node_positions, self.EI, N, self.width)


@dataclass(frozen=True)
class LoadCase:
    """Transverse loading.

    point_loads: (position, force) pairs in m and N.
    line_load: nodal values of a distributed load in N/m, linear per element.
    residual_moment: per-element built-in bending moment M0 = stress
    gradient x I, in N*m. Only its variation along the beam produces
    deflection of a clamped-clamped beam.
    """

    point_loads: tuple = ()
    line_load: np.ndarray = None
    residual_moment: np.ndarray = None


@dataclass(frozen=True)
class DeflectionField:
    positions: np.ndarray
    nodal_displacement: np.ndarray
    nodal_rotation: np.ndarray

    def __post_init__(self):
        for name in ("positions", "nodal_displacement", "nodal_rotation"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def at(self, x):
        """Displacement at arbitrary positions using the element cubics."""
        xs = self.positions
        x = np.asarray(x, dtype=float)
        e = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)
        h = xs[e + 1] - xs[e]
        N = _hermite(np.clip((x - xs[e]) / h, 0.0, 1.0), h)
        w, t = self.nodal_displacement, self.nodal_rotation
        return N[0] * w[e] + N[1] * t[e] + N[2] * w[e + 1] + N[3] * t[e + 1]

    @property
    def center_displacement(self):
        return float(self.at(0.5 * self.positions[-1]))


def _hermite(xi, h):
    xi2, xi3 = xi * xi, xi * xi * xi
    return np.stack(np.broadcast_arrays(1 - 3 * xi2 + 2 * xi3,
                                        h * (xi - 2 * xi2 + xi3),
                                        3 * xi2 - 2 * xi3,
                                        h * (xi3 - xi2)))


def bending_stiffness(EI, h):
    return EI / h ** 3 * np.array([
        [12, 6 * h, -12, 6 * h],
        [6 * h, 4 * h * h, -6 * h, 2 * h * h],
        [-12, -6 * h, 12, -6 * h],
        [6 * h, 2 * h * h, -6 * h, 4 * h * h],
    ])


def geometric_stiffness(N, h):
    """Consistent geometric stiffness for axial force N (tension > 0)."""
    return N / (30 * h) * np.array([
        [36, 3 * h, -36, 3 * h],
        [3 * h, 4 * h * h, -3 * h, -h * h],
        [-36, -3 * h, 36, -3 * h],
        [3 * h, -h * h, -3 * h, 4 * h * h],
    ])


def build_mesh(beam, material, n_elements):
    if n_elements < 2:
        raise TooFewElements(f"need at least 2 elements, got {n_elements}")
    x = np.linspace(0.0, beam.length, n_elements + 1)
    EI = np.full(n_elements, material.youngs_modulus * beam.second_moment)
    N = np.full(n_elements, material.residual_stress * beam.cross_section)
    return BeamMesh(x, EI, N, beam.width)


def _assemble(mesh, geometric=True, axial_force=None):
    K = np.zeros((mesh.n_dof, mesh.n_dof))
    N = mesh.axial_force if axial_force is None else axial_force
    for e, h in enumerate(mesh.element_lengths()):
        ke = bending_stiffness(mesh.EI[e], h)
        if geometric and N[e] != 0.0:
            ke = ke + geometric_stiffness(N[e], h)
        d = slice(2 * e, 2 * e + 4)
        K[d, d] += ke
    return K


def _free_dofs(mesh):
    return np.arange(2, mesh.n_dof - 2)


def stiffness_matrix(mesh):
    """Reduced (clamped) tangent stiffness."""
    free = _free_dofs(mesh)
    return _assemble(mesh)[np.ix_(free, free)]


def critical_axial_force(mesh):
    """Magnitude of the uniform compressive force that buckles the mesh."""
    free = _free_dofs(mesh)
    Kb = _assemble(mesh, geometric=False)[np.ix_(free, free)]
    Kg = _assemble(mesh, axial_force=np.ones(mesh.n_elements))
    Kg -= _assemble(mesh, geometric=False)
    Kg = Kg[np.ix_(free, free)]
    return float(scipy.linalg.eigh(Kb, Kg, eigvals_only=True, subset_by_index=[0, 0])[0])


def _factor(mesh):
    try:
        return scipy.linalg.cho_factor(stiffness_matrix(mesh))
    except np.linalg.LinAlgError:
        p_cr = critical_axial_force(mesh)
        raise SingularSystem(
            f"stiffness not positive definite: compressive force "
            f"{-float(np.min(mesh.axial_force)):.6g} N reaches critical load {p_cr:.6g} N",
            critical_axial_force=p_cr) from None


def load_vector(mesh, load):
    f = np.zeros(mesh.n_dof)
    x = mesh.node_positions
    L = mesh.length
    for pos, force in load.point_loads:
        if not -1e-12 * L <= pos <= L * (1 + 1e-12):
            raise ValueError(f"point load at {pos} outside the beam")
        e = int(np.clip(np.searchsorted(x, pos, side="right") - 1, 0, mesh.n_elements - 1))
        h = x[e + 1] - x[e]
        f[2 * e:2 * e + 4] += force * _hermite(np.clip((pos - x[e]) / h, 0, 1), h)
    if load.line_load is not None:
        q = np.asarray(load.line_load, dtype=float)
        for e, h in enumerate(mesh.element_lengths()):
            qg = q[e] * (1 - _GAUSS_XI) + q[e + 1] * _GAUSS_XI
            f[2 * e:2 * e + 4] += h * (_hermite(_GAUSS_XI, h) @ (_GAUSS_W * qg))
    if load.residual_moment is not None:
        m = np.asarray(load.residual_moment, dtype=float)
        idx = 2 * np.arange(mesh.n_elements)
        np.add.at(f, idx + 1, -m)
        np.add.at(f, idx + 3, m)
    return f


def _field(mesh, u_free):
    u = np.zeros(mesh.n_dof)
    u[_free_dofs(mesh)] = u_free
    return DeflectionField(mesh.node_positions, u[0::2], u[1::2])


def assemble_and_solve(mesh, load):
    factor = _factor(mesh)
    f = load_vector(mesh, load)[_free_dofs(mesh)]
    return _field(mesh, scipy.linalg.cho_solve(factor, f))


def _center_node(mesh):
    x = mesh.node_positions
    i = int(np.argmin(np.abs(x - 0.5 * mesh.length)))
    if abs(x[i] - 0.5 * mesh.length) > 1e-9 * mesh.length:
        raise MeshMisaligned("no node at the beam center; use an even element count")
    return i


def numeric_spring_constant(mesh):
    """Center point-load stiffness P / delta from a unit-load solve."""
    i = _center_node(mesh)
    pos = float(mesh.node_positions[i])
    field_ = assemble_and_solve(mesh, LoadCase(point_loads=((pos, -1.0),)))
    return -1.0 / field_.nodal_displacement[i]


def _span_mask(points, spans):
    if spans is None:
        return np.ones_like(points, dtype=bool)
    mask = np.zeros_like(points, dtype=bool)
    for a, b in spans:
        mask |= (points >= a) & (points <= b)
    return mask


def release_profile(mesh, material, moment_spans=None):
    """Post-release shape under the film's stress gradient.

    The gradient acts as a built-in moment gradient x I on the elements whose
    midpoints fall in ``moment_spans`` (default: the whole beam, which leaves
    a uniform clamped-clamped beam flat). The mid-plane stress is already in
    the mesh axial forces.
    """
    I = mesh.EI / material.youngs_modulus
    mask = _span_mask(mesh.element_midpoints(), moment_spans)
    m = np.where(mask, material.stress_gradient * I, 0.0)
    return assemble_and_solve(mesh, LoadCase(residual_moment=m))


@dataclass(frozen=True)
class Calibration:
    stress_gradient: float
    release: DeflectionField
    iterations: int


def calibrate_stress_gradient(mesh, material, target_center, moment_spans=None,
                              rtol=1e-10, max_iter=200):
    """Bisect the stress gradient until the center deflection hits the target."""
    from dataclasses import replace

    def center(gradient):
        return release_profile(mesh, replace(material, stress_gradient=gradient),
                               moment_spans).center_displacement

    if target_center == 0:
        return Calibration(0.0, release_profile(mesh, replace(material, stress_gradient=0.0),
                                                moment_spans), 0)
    probe = 1e6
    c = center(probe)
    if c == 0:
        raise NoConvergence("stress gradient produces no center deflection on these spans")
    if (c > 0) != (target_center > 0):
        probe = -probe
    lo, hi = 0.0, probe
    n = 0
    while abs(center(hi)) < abs(target_center):
        lo, hi = hi, 2 * hi
        n += 1
        if n > 200:
            raise NoConvergence("could not bracket the target deflection")
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        c = center(mid)
        if abs(c - target_center) <= rtol * abs(target_center):
            break
        if abs(c) < abs(target_center):
            lo = mid
        else:
            hi = mid
    else:
        raise NoConvergence("stress-gradient bisection did not converge")
    return Calibration(mid, release_profile(mesh, replace(material, stress_gradient=mid),
                                            moment_spans), it)


def _aligned(profile, span, tol):
    """Profile abscissae shifted so the profile center sits on the beam center."""
    if profile.span < span - tol:
        raise SpanMismatch(
            f"profile span {profile.span:.6g} m does not cover beam span {span:.6g} m")
    return profile.x - (profile.x[0] + 0.5 * profile.span) + 0.5 * span


def initial_gap_at(profile, positions, span):
    tol = 1e-9 * span + (profile.x[1] - profile.x[0])
    xp = _aligned(profile, span, tol)
    return np.interp(positions, xp, profile.h)


def gap_function(release, initial_gap_profile, n_samples=None):
    """Signed gap initial(x) + w(x) over the beam span.

    The initial profile is center-aligned on the beam; a wider profile is
    cropped. Sampling defaults to the mesh nodes, or a uniform grid of at
    least 16 points for coarse meshes.
    """
    span = float(release.positions[-1])
    if n_samples is None and len(release.positions) >= 16:
        xs = release.positions
    else:
        xs = np.linspace(0.0, span, max(n_samples or 0, 16))
    gap = initial_gap_at(initial_gap_profile, xs, span) + release.at(xs)
    return HeightProfile(xs, gap, allow_negative=True)


def _electrostatic_load(mesh, g0_nodes, field_w, field_t, voltage, mask_fn, permittivity):
    """Consistent nodal forces of the (attractive) electrostatic pressure."""
    x = mesh.node_positions
    h = mesh.element_lengths()
    f = np.zeros(mesh.n_dof)
    xg = x[:-1, None] + h[:, None] * _GAUSS_XI[None, :]
    Ng = _hermite(_GAUSS_XI[None, :], h[:, None])              # (4, ne, 3)
    w = (Ng[0] * field_w[:-1, None] + Ng[1] * field_t[:-1, None]
         + Ng[2] * field_w[1:, None] + Ng[3] * field_t[1:, None])
    g0 = g0_nodes[:-1, None] * (1 - _GAUSS_XI) + g0_nodes[1:, None] * _GAUSS_XI
    gap = g0 + w
    if np.any(gap[mask_fn(xg)] <= 0):
        return None
    q = np.where(mask_fn(xg), -0.5 * permittivity * voltage ** 2 * mesh.width / gap ** 2, 0.0)
    fe = h[None, :] * np.einsum("ieg,g,eg->ie", Ng, _GAUSS_W, q)
    for k in range(4):
        np.add.at(f, 2 * np.arange(mesh.n_elements) + k, fe[k])
    return f


def coupled_electrostatic_solve(mesh, gap_profile, voltage, actuation_spans,
                                permittivity=VACUUM_PERMITTIVITY, tol=1e-12, max_iter=5000):
    """Fixed-point electrostatic-structural iteration.

    The pressure eps V^2 / (2 g^2) acts on ``actuation_spans`` and is
    recomputed from the current gap after each linear solve. Raises
    ``PullIn`` when the gap closes or the update grows for three consecutive
    iterations.
    """
    if voltage < 0:
        raise ValueError("voltage must be >= 0")
    span = mesh.length
    g0 = initial_gap_at(gap_profile, mesh.node_positions, span)
    if np.any(g0 <= 0):
        raise ValueError("initial gap must be positive everywhere")
    free = _free_dofs(mesh)
    factor = _factor(mesh)

    def mask_fn(pts):
        return _span_mask(pts, actuation_spans)

    w = np.zeros(len(mesh.node_positions))
    t = np.zeros_like(w)
    if voltage == 0:
        return DeflectionField(mesh.node_positions, w, t)
    prev_step = math.inf
    growing = 0
    for _ in range(max_iter):
        f = _electrostatic_load(mesh, g0, w, t, voltage, mask_fn, permittivity)
        if f is None:
            raise PullIn(f"gap closed at {voltage:.6g} V")
        u = np.zeros(mesh.n_dof)
        u[free] = scipy.linalg.cho_solve(factor, f[free])
        step = float(np.max(np.abs(u[0::2] - w)))
        w, t = u[0::2], u[1::2]
        if step < tol:
            return DeflectionField(mesh.node_positions, w, t)
        growing = growing + 1 if step > prev_step else 0
        if growing >= 3:
            raise PullIn(f"gap collapse at {voltage:.6g} V")
        prev_step = step
    raise NoConvergence(f"coupled solve not converged after {max_iter} iterations")


def distributed_pull_in_voltage(mesh, gap_profile, actuation_spans, v_high,
                                permittivity=VACUUM_PERMITTIVITY, rtol=1e-4):
    """Bisection on the bias for the onset of fixed-point divergence.

    Non-convergence within the iteration cap counts as pulled in, since the
    iteration only stalls at or past the fold.
    """
    def holds(v):
        try:
            coupled_electrostatic_solve(mesh, gap_profile, v, actuation_spans, permittivity)
            return True
        except (PullIn, NoConvergence):
            return False

    lo, hi = 0.0, v_high
    while holds(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
