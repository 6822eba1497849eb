import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualgap.core import BeamGeometry, Material, um
from dualgap.errors import MeshMisaligned, PullIn, SingularSystem, SpanMismatch, TooFewElements
from dualgap.fem import (
    BeamMesh,
    LoadCase,
    assemble_and_solve,
    build_mesh,
    calibrate_stress_gradient,
    coupled_electrostatic_solve,
    critical_axial_force,
    distributed_pull_in_voltage,
    gap_function,
    numeric_spring_constant,
    release_profile,
)
from dualgap.lumped import LumpedActuator, fixed_fixed_spring_constant, pull_in_voltage
from dualgap.profile import HeightProfile, uniform_profile

BEAM = BeamGeometry(um(800), um(80), um(2))
SIO2 = Material("SiO2", 70e9)


def mesh_of(n, material=SIO2, beam=BEAM):
    return build_mesh(beam, material, n)


def clamped_point_load_deflection(P, a, x, L, EI):
    """Closed-form deflection of a clamped-clamped beam, load P at a (Roark)."""
    b = L - a
    if x > a:
        return clamped_point_load_deflection(P, b, L - x, L, EI)
    return P * b * b * x * x * (3 * a * L - (3 * a + b) * x) / (6 * EI * L ** 3)


def sine_load_solution(q0, L, EI, x):
    """EI w'''' = q0 sin(pi x / L) with w = w' = 0 at both ends."""
    c = q0 / EI * (L / math.pi) ** 4
    s = q0 / EI * (L / math.pi) ** 3
    c1 = -s
    # 3 c3 L^2 + 2 c2 L = s - c1 ; c3 L^3 + c2 L^2 = -c1 L
    A = np.array([[3 * L ** 2, 2 * L], [L ** 3, L ** 2]])
    c3, c2 = np.linalg.solve(A, [s - c1, -c1 * L])
    return c * np.sin(math.pi * x / L) + c3 * x ** 3 + c2 * x ** 2 + c1 * x


def test_build_mesh_examples():
    m = build_mesh(BEAM, SIO2, 4)
    assert m.node_positions == pytest.approx([0, um(200), um(400), um(600), um(800)])
    assert m.EI == pytest.approx(np.full(4, 70e9 * 80e-6 * 8e-18 / 12))
    assert m.EI[0] == pytest.approx(3.73e-12, rel=1e-3)
    assert np.all(m.axial_force == 0)
    stressed = build_mesh(BEAM, dataclasses.replace(SIO2, residual_stress=20e6), 4)
    assert stressed.axial_force == pytest.approx(np.full(4, 20e6 * 80e-6 * 2e-6))
    with pytest.raises(TooFewElements):
        build_mesh(BEAM, SIO2, 1)


def test_center_point_load_exact():
    for n in (2, 4, 10, 64):
        m = mesh_of(n)
        f = assemble_and_solve(m, LoadCase(point_loads=((BEAM.length / 2, -1e-6),)))
        expected = -1e-6 * BEAM.length ** 3 / (192 * m.EI[0])
        assert f.nodal_displacement[n // 2] == pytest.approx(expected, rel=1e-10)


def test_zero_load_gives_zero_field():
    f = assemble_and_solve(mesh_of(8), LoadCase())
    assert np.all(f.nodal_displacement == 0) and np.all(f.nodal_rotation == 0)


def test_clamped_ends():
    f = assemble_and_solve(mesh_of(8), LoadCase(point_loads=((um(300), -1e-6),)))
    for i in (0, -1):
        assert f.nodal_displacement[i] == 0 and f.nodal_rotation[i] == 0


@pytest.mark.parametrize("n", [2, 3, 8, 33])
def test_nodal_exactness_off_center(n):
    m = mesh_of(n)
    a = float(m.node_positions[1])
    f = assemble_and_solve(m, LoadCase(point_loads=((a, -2e-6),)))
    for x, w in zip(m.node_positions, f.nodal_displacement):
        expected = clamped_point_load_deflection(-2e-6, a, x, BEAM.length, m.EI[0])
        assert w == pytest.approx(expected, rel=1e-10, abs=1e-10 * abs(f.nodal_displacement).max())


def test_tension_reduces_deflection():
    load = LoadCase(point_loads=((BEAM.length / 2, -1e-6),))
    free = assemble_and_solve(mesh_of(16), load).center_displacement
    taut = assemble_and_solve(mesh_of(16, dataclasses.replace(SIO2, residual_stress=5e6)),
                              load).center_displacement
    assert abs(taut) < abs(free)


def test_numeric_spring_constant_examples():
    m = mesh_of(64)
    assert numeric_spring_constant(m) == pytest.approx(fixed_fixed_spring_constant(BEAM, 70e9), rel=1e-10)
    assert numeric_spring_constant(m) == pytest.approx(1.40, rel=1e-3)
    stiffer = mesh_of(64, dataclasses.replace(SIO2, youngs_modulus=140e9))
    assert numeric_spring_constant(stiffer) == pytest.approx(2 * numeric_spring_constant(m), rel=1e-10)
    with pytest.raises(MeshMisaligned):
        numeric_spring_constant(mesh_of(5))


def test_spring_constant_monotone_in_axial_force():
    base = mesh_of(32)
    p_cr = critical_axial_force(base)
    forces = np.linspace(-0.9 * p_cr, 2 * p_cr, 15)
    ks = [numeric_spring_constant(base.with_axial_force(f)) for f in forces]
    assert np.all(np.diff(ks) > 0)
    k0 = numeric_spring_constant(base)
    assert numeric_spring_constant(base.with_axial_force(1e-5)) > k0
    assert numeric_spring_constant(base.with_axial_force(-1e-5)) < k0


def test_buckling_load_matches_euler():
    m = mesh_of(32)
    euler = 4 * math.pi ** 2 * m.EI[0] / BEAM.length ** 2
    assert critical_axial_force(m) == pytest.approx(euler, rel=0.05)
    assert_solves = assemble_and_solve(m.with_axial_force(-0.97 * euler), LoadCase())
    assert np.all(assert_solves.nodal_displacement == 0)
    with pytest.raises(SingularSystem) as info:
        assemble_and_solve(m.with_axial_force(-1.03 * euler), LoadCase())
    assert info.value.critical_axial_force == pytest.approx(euler, rel=0.05)


def test_symmetric_load_symmetric_field():
    m = mesh_of(40)
    q = 1e-3 * np.cos(np.linspace(-1, 1, 41)) ** 2
    f = assemble_and_solve(m, LoadCase(line_load=-q))
    w = f.nodal_displacement
    assert np.max(np.abs(w - w[::-1])) < 1e-12 * np.max(np.abs(w))


def test_uniform_load_exact_at_nodes():
    m = mesh_of(6)
    q = -2e-3
    f = assemble_and_solve(m, LoadCase(line_load=np.full(7, q)))
    x = m.node_positions
    L, EI = BEAM.length, m.EI[0]
    exact = q * x ** 2 * (L - x) ** 2 / (24 * EI)
    assert f.nodal_displacement == pytest.approx(exact, rel=1e-10, abs=1e-22)


def test_distributed_load_convergence_rate():
    errs = []
    L = BEAM.length
    for n in (8, 16, 32, 64):
        m = mesh_of(n)
        q = -1e-3 * np.sin(math.pi * m.node_positions / L)
        f = assemble_and_solve(m, LoadCase(line_load=q))
        exact = sine_load_solution(-1e-3, L, m.EI[0], m.node_positions)
        errs.append(np.max(np.abs(f.nodal_displacement - exact)))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 1.9)


@settings(max_examples=30, deadline=None)
@given(i=st.integers(1, 19), j=st.integers(1, 19))
def test_reciprocity(i, j):
    m = mesh_of(20)
    xa, xb = float(m.node_positions[i]), float(m.node_positions[j])
    wa = assemble_and_solve(m, LoadCase(point_loads=((xb, 1.0),))).nodal_displacement[i]
    wb = assemble_and_solve(m, LoadCase(point_loads=((xa, 1.0),))).nodal_displacement[j]
    assert wa == pytest.approx(wb, rel=1e-10)


def test_release_flat_without_gradient():
    m = mesh_of(32)
    f = release_profile(m, SIO2, [(0, um(200)), (um(600), um(800))])
    assert np.all(f.nodal_displacement == 0)


def test_uniform_gradient_leaves_uniform_beam_flat():
    m = mesh_of(32)
    graded = dataclasses.replace(SIO2, stress_gradient=-1e13)
    f = release_profile(m, graded)
    assert np.max(np.abs(f.nodal_displacement)) < 1e-20


def test_release_symmetric_and_calibrated():
    m = mesh_of(64)
    spans = [(0, um(200)), (um(600), um(800))]
    cal = calibrate_stress_gradient(m, SIO2, -um(4.5), spans)
    w = cal.release.nodal_displacement
    assert cal.release.center_displacement == pytest.approx(-um(4.5), rel=1e-9)
    assert np.max(np.abs(w - w[::-1])) < 1e-12 * np.max(np.abs(w))
    assert w.min() == pytest.approx(-um(4.5), rel=1e-6)


def test_gap_function_examples():
    m = mesh_of(16)
    flat = release_profile(m, SIO2)
    initial = uniform_profile(um(800), um(4.5), 33)
    g = gap_function(flat, initial)
    assert g.h == pytest.approx(np.full(len(g.h), um(4.5)))
    # uniform -1 um "deflection" field
    from dualgap.fem import DeflectionField
    shifted = DeflectionField(m.node_positions, np.full(17, -um(1)), np.zeros(17))
    g = gap_function(shifted, initial)
    assert g.h == pytest.approx(np.full(len(g.h), um(3.5)))
    with pytest.raises(SpanMismatch):
        gap_function(flat, uniform_profile(um(500), um(4.5)))


def test_coupled_zero_voltage_and_rigid_limit():
    m = mesh_of(32)
    g0 = uniform_profile(um(800), um(4.5))
    spans = [(um(200), um(600))]
    f = coupled_electrostatic_solve(m, g0, 0.0, spans)
    assert np.all(f.nodal_displacement == 0)
    rigid = build_mesh(BEAM, dataclasses.replace(SIO2, youngs_modulus=70e9 * 1e6), 32)
    f = coupled_electrostatic_solve(rigid, g0, 10.0, spans)
    assert np.max(np.abs(f.nodal_displacement)) < 1e-6 * um(4.5)


def test_coupled_pull_in_detection():
    m = mesh_of(32)
    g0 = uniform_profile(um(800), um(4.5))
    with pytest.raises(PullIn):
        coupled_electrostatic_solve(m, g0, 40.0, [(um(200), um(600))])


@pytest.mark.parametrize("span", [(200, 600), (275, 525)])
def test_distributed_pull_in_near_lumped(span):
    m = mesh_of(64)
    g0 = uniform_profile(um(800), um(4.5))
    spans = [(um(span[0]), um(span[1]))]
    area = um(span[1] - span[0]) * BEAM.width
    lumped = pull_in_voltage(LumpedActuator(numeric_spring_constant(m), um(4.5), area))
    v = distributed_pull_in_voltage(m, g0, spans, lumped)
    assert abs(v / lumped - 1) <= 0.25
