import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sta_designer.ermakov import (
    SQRT_2PI,
    chirp,
    effective_potential,
    effective_energy,
    ermakov_rhs,
    first_integral,
    gaussian_amplitude,
    integrate_ermakov,
    omega_squared_from_width,
    solve_boundary_widths,
    stationary_width,
    to_seconds,
    width_potential,
)
from sta_designer.errors import CollapseError, DomainError
from sta_designer.models import (
    ConstantU,
    ErmakovState,
    Model,
    PhysicalParams,
    Segment,
    TrapProtocol,
)
from sta_designer.schemes import design_inverse_engineering


def test_boundary_widths_repulsive(repulsive_params):
    a_i, a_f = solve_boundary_widths(repulsive_params)
    assert a_i == pytest.approx(1.001, abs=5e-4)
    assert a_f == pytest.approx(10.099, abs=5e-3)

    k = 0.01 / SQRT_2PI
    assert abs(a_i ** 4 - k * a_i - 1.0) < 1e-12
    assert abs(a_f ** 4 / 1e4 - k * a_f - 1.0) < 1e-12


def test_boundary_widths_linear(linear_params):
    a_i, a_f = solve_boundary_widths(linear_params)
    assert a_i == pytest.approx(1.0, abs=1e-12)
    assert a_f == pytest.approx(10.0, abs=1e-10)


@pytest.mark.parametrize("gamma", [2.0, 10.0])
def test_boundary_widths_grow_with_nonlinearity(gamma):
    widths = np.array([
        solve_boundary_widths(PhysicalParams(g_n=g, gamma=gamma))
        for g in (-0.05, -0.01, 0.0, 0.01, 0.05)
    ])
    assert np.all(np.diff(widths[:, 0]) > 0)
    assert np.all(np.diff(widths[:, 1]) > 0)
    assert np.all(widths[:, 1] > widths[:, 0])


@pytest.mark.parametrize("model,expected", [
    (Model.ORDINARY, 10.0),
    (Model.THOMAS_FERMI, 10.0 ** (4.0 / 3.0)),
])
def test_boundary_widths_reduced_models(model, expected):
    a_i, a_f = solve_boundary_widths(PhysicalParams(g_n=0.5, gamma=10.0, model=model))
    assert a_i == 1.0
    assert a_f == pytest.approx(expected, rel=1e-14)


def test_attractive_width_is_narrower():
    assert stationary_width(1.0, -0.5) < 1.0 < stationary_width(1.0, 0.5)


def test_stationary_width_needs_confining_trap():
    with pytest.raises(DomainError):
        stationary_width(0.0, 0.1)


def test_rhs_vanishes_at_stationary_widths(repulsive_params):
    a_i, a_f = solve_boundary_widths(repulsive_params)
    _, acc_i = ermakov_rhs(ErmakovState(a_i, 0.0), 1.0, repulsive_params)
    _, acc_f = ermakov_rhs(ErmakovState(a_f, 0.0), repulsive_params.u_final, repulsive_params)
    assert abs(acc_i) < 1e-10
    assert abs(acc_f) < 1e-10


def test_rhs_rejects_collapsed_width(linear_params):
    with pytest.raises(CollapseError):
        ermakov_rhs(ErmakovState(1e-8, 0.0), 1.0, linear_params)


def test_state_rejects_non_positive_width():
    with pytest.raises(DomainError):
        ErmakovState(0.0, 1.0)


@pytest.mark.parametrize("a,a_ddot,g_n,expected", [
    (1.0, 0.0, 0.0, 1.0),
    (10.0, 0.0, 0.0, 1e-4),
])
def test_omega_squared_from_width(a, a_ddot, g_n, expected):
    params = PhysicalParams(g_n=g_n)
    assert omega_squared_from_width(a, a_ddot, params) == pytest.approx(expected, rel=1e-14)


def test_omega_squared_inverts_stationary_width(repulsive_params):
    a_i, _ = solve_boundary_widths(repulsive_params)
    assert omega_squared_from_width(a_i, 0.0, repulsive_params) == pytest.approx(1.0, abs=1e-9)


def test_width_potential_domain():
    with pytest.raises(DomainError):
        width_potential(0.0, 0.0)
    with pytest.raises(DomainError):
        width_potential(np.array([1.0, -1.0]), 0.0)


def test_stationary_widths_sit_at_potential_minimum(repulsive_params):
    a_i, a_f = solve_boundary_widths(repulsive_params)
    h = 1e-5
    for a, u in ((a_i, 1.0), (a_f, repulsive_params.gamma ** -4)):
        U = lambda x: effective_potential(x, u, repulsive_params.g_n)
        assert (U(a + h) - U(a - h)) / (2 * h) == pytest.approx(0.0, abs=1e-8)
        assert U(a + 0.1) > U(a) and U(a - 0.1) > U(a)


def test_effective_energy_of_resting_cloud():
    assert effective_energy(ErmakovState(1.0, 0.0), 1.0, 0.0) == pytest.approx(1.0)
    # Thomas-Fermi: U = u a^2/2 + 1/a
    tf = effective_energy(ErmakovState(1.0, 0.0), 1.0, 0.0, Model.THOMAS_FERMI)
    assert tf == pytest.approx(1.5)


def test_first_integral_constant_on_plateau(repulsive_params):
    protocol = TrapProtocol([Segment(3.0, ConstantU(0.5))])
    traj = integrate_ermakov(protocol, ErmakovState(1.0, 0.0), repulsive_params)
    values = first_integral(traj.a, traj.a_dot, 0.5, repulsive_params)
    assert np.max(np.abs(values - values[0])) < 1e-8


def test_segment_edges_are_kept_twice(linear_params):
    protocol = TrapProtocol([
        Segment(1.0, ConstantU(-1.0)),
        Segment(0.5, ConstantU(1.0)),
    ])
    traj = integrate_ermakov(protocol, ErmakovState(1.0, 0.0), linear_params, points_per_segment=51)

    assert traj.times.size == 102
    assert traj.n_segments == 2
    edge = np.flatnonzero(traj.times == 1.0)
    assert edge.size == 2
    first, second = edge
    # State is continuous, the acceleration jumps with u
    assert traj.a[first] == traj.a[second]
    assert traj.a_dot[first] == traj.a_dot[second]
    assert traj.a_ddot[second] - traj.a_ddot[first] == pytest.approx(-2.0 * traj.a[first])
    assert traj.t_f == pytest.approx(1.5)


def test_acceleration_matches_equation_of_motion(repulsive_params):
    protocol = TrapProtocol([Segment(2.0, ConstantU(0.3))])
    traj = integrate_ermakov(protocol, ErmakovState(1.2, 0.1), repulsive_params)
    expected = -traj.u * traj.a + 1.0 / traj.a ** 3 + repulsive_params.interaction / traj.a ** 2
    assert_allclose(traj.a_ddot, expected, rtol=1e-12)
    assert_allclose(omega_squared_from_width(traj.a, traj.a_ddot, repulsive_params), traj.u, atol=1e-10)


def test_chirp_is_derived(linear_params):
    protocol = TrapProtocol([Segment(1.0, ConstantU(0.1))])
    traj = integrate_ermakov(protocol, ErmakovState(1.0, 0.0), linear_params)
    assert_allclose(traj.b, -traj.a_dot / (2.0 * traj.a))


def test_initial_width_below_floor_collapses(linear_params):
    protocol = TrapProtocol([Segment(1.0, ConstantU(1.0))])
    with pytest.raises(CollapseError):
        integrate_ermakov(protocol, ErmakovState(1e-7, 0.0), linear_params)


def test_empty_protocol_gives_single_point(linear_params):
    traj = integrate_ermakov(TrapProtocol([]), ErmakovState(1.0, 0.0), linear_params)
    assert traj.times.tolist() == [0.0]
    assert traj.t_f == 0.0


def test_inverse_engineering_protocol_reaches_target(repulsive_params):
    report = design_inverse_engineering(repulsive_params, t_f=5.45)
    a_i, a_f = report.aux['a_i'], report.aux['a_f']
    traj = integrate_ermakov(report.protocol, ErmakovState(a_i, 0.0), repulsive_params)
    assert abs(traj.a[-1] - a_f) < 1e-6
    assert abs(traj.a_dot[-1]) < 1e-6


def test_to_seconds():
    assert to_seconds(2.0 * math.pi, 1.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        to_seconds(1.0, 0.0)


def test_gaussian_amplitude_and_chirp(repulsive_params):
    assert gaussian_amplitude(1.0) == pytest.approx(math.pi ** -0.25)
    # |A|^2 sqrt(pi) a = 1
    assert_allclose(gaussian_amplitude(np.array([0.5, 2.0])) ** 2 * math.sqrt(math.pi) * np.array([0.5, 2.0]), 1.0)

    protocol = TrapProtocol([Segment(2.0, ConstantU(0.25))])
    traj = integrate_ermakov(protocol, ErmakovState(1.0, 0.0), repulsive_params)
    assert_allclose(chirp(traj.a, traj.a_dot), traj.b)
    assert chirp(1.0, 0.0) == 0.0
    # An expanding cloud carries a negative chirp
    assert np.all(chirp(traj.a[1:], traj.a_dot[1:]) < 0)
    with pytest.raises(DomainError):
        chirp(0.0, 1.0)
