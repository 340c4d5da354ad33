import math

import numpy as np
import pytest

from sta_designer.ermakov import integrate_ermakov
from sta_designer.errors import DomainError, GridMismatch, NoGroundState, NonConvergence, NormDrift
from sta_designer.gpe import (
    Grid,
    ImaginaryTimeRelaxation,
    WaveField,
    evolve_split_step,
    fidelity,
    gaussian_field,
    gpe_energy,
    ground_state_imaginary_time,
    max_time_step,
    simulate_protocol,
    width_of,
)
from sta_designer.metrics import max_relative_width_deviation
from sta_designer.models import ConstantU, ErmakovState, PhysicalParams, Segment, TrapProtocol
from sta_designer.schemes import design_bang_bang, design_two_jump


@pytest.mark.parametrize("n_points", [100, 128, 1000])
def test_grid_validation(n_points):
    with pytest.raises(DomainError):
        Grid(16.0, n_points)


def test_grid_spacing(small_grid):
    assert small_grid.dx == pytest.approx(32.0 / 512)
    assert small_grid.x[0] == -16.0
    assert small_grid.k[1] == pytest.approx(small_grid.dk)


def test_grid_hosts_cloud(small_grid):
    small_grid.check_hosts(1.0, 2.0)
    with pytest.raises(DomainError):
        small_grid.check_hosts(10.0)


def test_gaussian_is_normalized(small_grid):
    assert gaussian_field(small_grid, 1.0, b=0.3).norm() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_width_of_gaussian(a):
    grid = Grid(32.0, 1024)
    assert width_of(gaussian_field(grid, a)) == pytest.approx(a, rel=1e-10)


def test_width_of_needs_normalized_field(small_grid):
    field = gaussian_field(small_grid, 1.0)
    with pytest.raises(DomainError):
        width_of(WaveField(small_grid, 2.0 * field.values))


def test_gaussian_overlap():
    grid = Grid(64.0, 2048)
    value = fidelity(gaussian_field(grid, 1.0), gaussian_field(grid, 10.0))
    assert value == pytest.approx(20.0 / 101.0, rel=1e-8)


def test_self_overlap_ignores_global_phase(small_grid):
    field = gaussian_field(small_grid, 1.0, b=0.2)
    rotated = WaveField(small_grid, field.values * np.exp(0.7j))
    assert fidelity(field, rotated) == pytest.approx(1.0, abs=1e-12)


def test_overlap_on_different_grids(small_grid):
    with pytest.raises(GridMismatch):
        fidelity(gaussian_field(small_grid, 1.0), gaussian_field(Grid(32.0, 1024), 1.0))


def test_field_shape_must_match_grid(small_grid):
    with pytest.raises(GridMismatch):
        WaveField(small_grid, np.ones(10))


def test_energy_of_harmonic_ground_state(small_grid):
    assert gpe_energy(gaussian_field(small_grid, 1.0), 1.0, 0.0) == pytest.approx(0.5, abs=1e-10)


def test_imaginary_time_linear_ground_state(small_grid):
    ground = ground_state_imaginary_time(1.0, 0.0, small_grid)
    assert ground.norm() == pytest.approx(1.0, abs=1e-10)
    assert width_of(ground) == pytest.approx(1.0, abs=1e-4)
    assert gpe_energy(ground, 1.0, 0.0) == pytest.approx(0.5, abs=1e-5)
    # Phase fixed so the peak is real and positive
    peak = ground.values[np.argmax(np.abs(ground.values))]
    assert abs(peak.imag) < 1e-12 and peak.real > 0


def test_imaginary_time_nonlinear_width_ordering(small_grid):
    attractive = width_of(ground_state_imaginary_time(1.0, -0.5, small_grid))
    repulsive = width_of(ground_state_imaginary_time(1.0, 0.5, small_grid))
    assert attractive < 1.0 < repulsive


def test_no_ground_state_in_expulsive_trap(small_grid):
    with pytest.raises(NoGroundState):
        ground_state_imaginary_time(-1.0, 0.0, small_grid)


def test_retries_double_the_budget(small_grid):
    relaxation = ImaginaryTimeRelaxation(1.0, 1.0, small_grid, tol=1e-15, max_steps=5)
    with pytest.raises(NonConvergence):
        relaxation.relax_with_retries()
    assert relaxation.max_steps == 20
    assert relaxation.steps_taken == 5 + 10 + 20


def test_max_time_step():
    protocol = TrapProtocol([Segment(1.0, ConstantU(-4.0)), Segment(1.0, ConstantU(4.0))])
    assert max_time_step(protocol) == pytest.approx(0.005)
    assert max_time_step(protocol, delta=16.0) == pytest.approx(0.0025)
    assert max_time_step(TrapProtocol([Segment(1.0, ConstantU(0.01))])) == pytest.approx(0.01)


def test_time_step_above_limit_is_rejected(small_grid):
    protocol = TrapProtocol([Segment(1.0, ConstantU(1.0))])
    with pytest.raises(DomainError):
        evolve_split_step(gaussian_field(small_grid, 1.0), protocol, 0.0, dt=0.1)


def test_stationary_state_stays_put(small_grid):
    initial = gaussian_field(small_grid, 1.0)
    protocol = TrapProtocol([Segment(1.0, ConstantU(1.0))])
    result = evolve_split_step(
        initial, protocol, 0.0, dt=0.01, record_stride=10, snapshot_times=[0.0, 0.5, 1.0]
    )

    assert result.n_steps == 100
    assert list(result.observables.columns) == ['t', 'norm', 'width', 'energy']
    assert len(result.observables) == 11
    assert result.times[-1] == pytest.approx(1.0)
    assert fidelity(initial, result.final_field) == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(result.widths, 1.0, atol=1e-4)
    assert sorted(result.snapshots) == [0.0, 0.5, 1.0]
    assert result.final_field.norm() == pytest.approx(1.0, abs=1e-10)


def test_steps_land_on_segment_edges(small_grid):
    protocol = TrapProtocol([Segment(0.333, ConstantU(1.0)), Segment(0.25, ConstantU(0.5))])
    result = evolve_split_step(gaussian_field(small_grid, 1.0), protocol, 0.0, dt=0.01, record_stride=1000)
    # ceil(33.3) + 25 steps, and the segment ends are always recorded
    assert result.n_steps == 34 + 25
    assert result.times.tolist() == pytest.approx([0.0, 0.333, 0.583])


def test_norm_drift_is_reported(small_grid):
    protocol = TrapProtocol([Segment(0.1, ConstantU(1.0))])
    with pytest.raises(NormDrift):
        evolve_split_step(gaussian_field(small_grid, 1.0), protocol, 0.0, dt=0.01, norm_tol=-1.0)


def test_linear_breathing_matches_width_equation(small_grid):
    # Sudden quench u: 1 -> 0.5 drives an exact Gaussian breathing mode
    protocol = TrapProtocol([Segment(2.0, ConstantU(0.5))])
    result = evolve_split_step(gaussian_field(small_grid, 1.0), protocol, 0.0, dt=0.005, record_stride=20)
    traj = integrate_ermakov(protocol, ErmakovState(1.0, 0.0), PhysicalParams(g_n=0.0))
    assert max_relative_width_deviation(result.times, result.widths, traj) < 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("design_fn", [design_two_jump, design_bang_bang])
def test_linear_shortcuts_reach_final_ground_state(design_fn, linear_params, full_grid):
    report = design_fn(linear_params)
    result, target, value = simulate_protocol(
        report.protocol, 0.0, 1.0, linear_params.u_final, full_grid, delta=linear_params.delta,
    )
    assert value >= 0.999
    assert width_of(target) == pytest.approx(10.0, rel=1e-3)
    assert max_relative_width_deviation(result.times, result.widths, report.trajectory) < 1e-2


def test_width_error_is_second_order_in_dt(small_grid):
    omega = math.sqrt(0.5)
    protocol = TrapProtocol([Segment(2.0, ConstantU(0.5))])
    errors = []
    for dt, stride in [(0.01, 10), (0.005, 20), (0.0025, 40)]:
        result = evolve_split_step(gaussian_field(small_grid, 1.0), protocol, 0.0, dt=dt, record_stride=stride)
        t = result.times
        exact = np.sqrt(np.cos(omega * t) ** 2 + np.sin(omega * t) ** 2 / omega ** 2)
        errors.append(np.max(np.abs(result.widths - exact)))
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    assert all(3.5 <= r <= 4.5 for r in ratios)


def test_energy_is_conserved_in_a_static_trap(small_grid):
    initial = ground_state_imaginary_time(1.0, 0.1, small_grid)
    protocol = TrapProtocol([Segment(0.5, ConstantU(1.0))])
    result = evolve_split_step(initial, protocol, 0.1, dt=2.5e-4, record_stride=100)
    energy = result.observables['energy'].to_numpy()
    assert result.n_steps == 2000
    assert np.ptp(energy) / energy[0] < 1e-8


def test_norm_is_kept_over_thousands_of_steps(small_grid):
    protocol = TrapProtocol([Segment(5.0, ConstantU(0.5)), Segment(5.0, ConstantU(2.0))])
    result = evolve_split_step(gaussian_field(small_grid, 1.0), protocol, 0.1, dt=0.005, record_stride=100)
    norm = result.observables['norm'].to_numpy()
    assert result.n_steps == 2000
    assert np.max(np.abs(norm - norm[0])) < 2e-9


def test_imaginary_time_matches_analytic_ground_state(small_grid):
    ground = ground_state_imaginary_time(1.0, 0.0, small_grid)
    assert fidelity(ground, gaussian_field(small_grid, 1.0)) > 1.0 - 1e-9


def test_imaginary_time_in_a_weak_trap():
    grid = Grid(128.0, 2048)
    ground = ground_state_imaginary_time(1e-4, 0.0, grid)
    assert width_of(ground) == pytest.approx(10.0, rel=1e-5)


@pytest.mark.slow
@pytest.mark.parametrize("design_fn", [design_two_jump, design_bang_bang])
def test_nonlinear_shortcuts_follow_width_design(design_fn, repulsive_params, full_grid):
    report = design_fn(repulsive_params)
    result, _, value = simulate_protocol(
        report.protocol, 0.01, 1.0, repulsive_params.u_final, full_grid, delta=repulsive_params.delta,
    )
    assert value >= 0.99
    assert max_relative_width_deviation(result.times, result.widths, report.trajectory) < 2e-2
