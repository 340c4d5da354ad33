import math

import pytest

from sta_designer.errors import ConfigError
from sta_designer.models import Model, ScanStatus, Scheme
from sta_designer.scan import (
    GpeSettings,
    ScanSpec,
    fit_rows_log_slope,
    fit_unattainability,
    run_scan,
    scan_energy,
    scan_fidelity,
    scan_min_time,
    unattainability_curve,
)


def test_min_time_grid_order_and_values():
    rows = scan_min_time(10.0, [-0.01, 0.0, 0.01], [1.0, 2.0])
    assert [(r.g_n, r.delta) for r in rows] == [
        (-0.01, 1.0), (-0.01, 2.0), (0.0, 1.0), (0.0, 2.0), (0.01, 1.0), (0.01, 2.0),
    ]
    assert all(r.ok for r in rows)
    assert rows[2].t_f == pytest.approx(3.088, abs=2e-3)
    # Longer with gN, shorter with delta
    assert rows[0].t_f < rows[2].t_f < rows[4].t_f
    assert rows[3].t_f < rows[2].t_f
    assert set(rows[0].extra) == {'t1', 't2', 'x1_B'}
    assert rows[0].energy > 0


def test_min_time_records_failures_as_rows():
    rows = scan_min_time(10.0, [0.0], [0.5, 1.0])
    assert len(rows) == 2
    assert rows[0].status is ScanStatus.NUMERICAL_FAILURE
    assert rows[0].t_f is None
    assert 'delta' in rows[0].message
    assert rows[1].ok


def test_parallel_scan_keeps_order():
    serial = scan_min_time(10.0, [-0.02, 0.0, 0.02], [1.0, 4.0], workers=1)
    parallel = scan_min_time(10.0, [-0.02, 0.0, 0.02], [1.0, 4.0], workers=4)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]


@pytest.mark.parametrize("grid", [[], [1.0, 0.5], [0.0, math.nan]])
def test_bad_grids_are_rejected(grid):
    with pytest.raises(ConfigError):
        scan_min_time(10.0, [0.0], grid)


def test_scan_spec_validation():
    with pytest.raises(ConfigError):
        ScanSpec(schemes=[])
    with pytest.raises(ConfigError):
        ScanSpec(gn_grid=[0.1, 0.0])
    spec = ScanSpec(schemes=['two-jump'], gn_grid=[0.0, 0.01])
    assert spec.schemes == [Scheme.TWO_JUMP]
    assert spec.to_dict()['gn_grid'] == [0.0, 0.01]


def test_energy_scan(linear_params):
    rows = scan_energy(
        [Scheme.INVERSE_ENGINEERING, Scheme.TWO_JUMP, Scheme.BANG_BANG], [0.0, 0.01], 10.0,
    )
    assert [(r.scheme, r.g_n) for r in rows] == [
        ('inverse-engineering', 0.0), ('inverse-engineering', 0.01),
        ('two-jump', 0.0), ('two-jump', 0.01),
        ('bang-bang', 0.0), ('bang-bang', 0.01),
    ]
    assert all(r.ok and r.energy > 0 for r in rows)
    assert rows[0].t_f == pytest.approx(5.45)
    assert all('energy_direct' in r.extra for r in rows)


def test_unattainability_curve():
    rows = unattainability_curve(0.01, 1.0, [10.0, 100.0])
    assert [(r.model, r.gamma) for r in rows] == [
        ('generalized', 10.0), ('generalized', 100.0),
        ('ordinary', 10.0), ('ordinary', 100.0),
        ('thomas-fermi', 10.0), ('thomas-fermi', 100.0),
    ]
    assert all(r.ok for r in rows)
    ordinary = [r for r in rows if r.model == 'ordinary']
    for row in ordinary:
        assert row.g_n == 0.0
        assert row.t_f == pytest.approx(row.extra['model_curve'], abs=1e-8)
        assert row.extra['log_omega_ratio'] == pytest.approx(-2.0 * math.log(row.gamma))


def test_fit_rows_log_slope():
    rows = unattainability_curve(0.0, 1.0, [10.0, 20.0, 50.0, 100.0])
    slope, intercept = fit_rows_log_slope(rows, Model.ORDINARY)
    assert slope == pytest.approx(1.0, abs=1e-2)
    assert intercept == pytest.approx(math.pi / 4, abs=2e-2)
    tf_slope, _ = fit_rows_log_slope(rows, Model.THOMAS_FERMI)
    assert tf_slope / slope == pytest.approx(4.0 / 3.0, abs=2e-2)


def test_run_scan_dispatch():
    spec = ScanSpec(gn_grid=[0.0], delta_grid=[1.0], gamma_grid=[10.0])
    rows = run_scan('min-time', spec)
    assert len(rows) == 1 and rows[0].ok
    with pytest.raises(ConfigError):
        run_scan('bogus', spec)


def test_gpe_settings_defaults():
    settings = GpeSettings()
    assert settings.grid.n_points == 4096
    assert settings.to_dict()['grid_half_width'] == 128.0


def test_fidelity_scan_records_grid_failures():
    # A box too small for the final cloud fails the point, not the scan
    settings = GpeSettings(grid_half_width=16.0, grid_points=512)
    rows = scan_fidelity([Scheme.TWO_JUMP], [0.0], 10.0, settings)
    assert len(rows) == 1
    assert rows[0].status is ScanStatus.NUMERICAL_FAILURE
    assert rows[0].fidelity is None


@pytest.mark.slow
def test_fidelity_scan():
    rows = scan_fidelity([Scheme.TWO_JUMP, Scheme.BANG_BANG], [0.0], 10.0)
    assert all(r.ok for r in rows)
    assert all(r.fidelity >= 0.999 for r in rows)
    assert all(r.extra['max_width_deviation'] < 1e-2 for r in rows)


def test_run_scan_covers_gamma_and_delta_grids():
    spec = ScanSpec(schemes=['two-jump'], gn_grid=[0.0], delta_grid=[1.0, 2.0], gamma_grid=[5.0, 10.0])
    rows = run_scan('energy', spec)
    assert [(r.gamma, r.delta) for r in rows] == [(5.0, 1.0), (5.0, 2.0), (10.0, 1.0), (10.0, 2.0)]
    assert all(r.ok for r in rows)

    rows = run_scan('min-time', spec)
    assert [(r.gamma, r.delta) for r in rows] == [(5.0, 1.0), (5.0, 2.0), (10.0, 1.0), (10.0, 2.0)]
    # A larger expansion takes longer at the same bound
    assert rows[0].t_f < rows[2].t_f
    assert rows[1].t_f < rows[3].t_f


def test_unattainability_scan_keeps_every_nonlinearity():
    spec = ScanSpec(gn_grid=[0.0, 0.01], gamma_grid=[10.0, 100.0])
    rows = run_scan('unattainability', spec)
    assert len(rows) == 8
    generalized = [(r.g_n, r.gamma) for r in rows if r.model == 'generalized']
    assert generalized == [(0.0, 10.0), (0.0, 100.0), (0.01, 10.0), (0.01, 100.0)]

    fits = fit_unattainability(rows)
    assert set(fits) == {
        'generalized gN=0 delta=1', 'generalized gN=0.01 delta=1', 'ordinary', 'thomas-fermi',
    }
    assert fits['ordinary']['slope'] == pytest.approx(1.0, abs=5e-2)


def test_fit_unattainability_skips_single_point_curves():
    rows = unattainability_curve(0.0, 1.0, [10.0])
    assert fit_unattainability(rows) == {}


@pytest.mark.parametrize("kwargs", [
    {'delta_grid': [0.0]},
    {'delta_grid': [-1.0, 1.0]},
    {'gamma_grid': [-10.0]},
])
def test_non_positive_grids_are_rejected(kwargs):
    with pytest.raises(ConfigError):
        ScanSpec(**kwargs)


def test_non_positive_arguments_are_rejected():
    with pytest.raises(ConfigError):
        scan_min_time(10.0, [0.0], [-1.0, 1.0])
    with pytest.raises(ConfigError):
        scan_min_time(0.0, [0.0], [1.0])
    with pytest.raises(ConfigError):
        scan_energy([Scheme.TWO_JUMP], [0.0], 10.0, delta=-2.0)
    with pytest.raises(ConfigError):
        unattainability_curve(0.0, 1.0, [0.0, 10.0])


@pytest.mark.parametrize("scan_type", ['min-time', 'energy'])
def test_run_scan_with_gpe_adds_fidelity(scan_type):
    settings = GpeSettings(grid_half_width=16.0, grid_points=512)
    spec = ScanSpec(schemes=['two-jump'], gn_grid=[0.0], delta_grid=[1.0], gamma_grid=[2.0], gpe=True)
    rows = run_scan(scan_type, spec, settings)
    assert len(rows) == 1 and rows[0].ok
    assert rows[0].fidelity >= 0.999
    assert rows[0].extra['max_width_deviation'] < 1e-2

    spec.gpe = False
    rows = run_scan(scan_type, spec, settings)
    assert rows[0].fidelity is None
    assert 'max_width_deviation' not in rows[0].extra


@pytest.mark.slow
def test_fidelity_is_more_robust_for_smooth_protocols_and_repulsion():
    gn_grid = [-0.05, -0.02, 0.0, 0.02, 0.05]
    rows = scan_fidelity([Scheme.INVERSE_ENGINEERING, Scheme.BANG_BANG], gn_grid, 10.0)
    assert all(r.ok for r in rows)
    fidelities = {(r.scheme, r.g_n): r.fidelity for r in rows}

    for g in gn_grid:
        assert fidelities[('inverse-engineering', g)] >= fidelities[('bang-bang', g)]
    for scheme in ('inverse-engineering', 'bang-bang'):
        for g in (0.02, 0.05):
            assert fidelities[(scheme, g)] >= fidelities[(scheme, -g)]
