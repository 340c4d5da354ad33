"""
Parameter scans over nonlinearity, frequency bound and expansion ratio.

Every grid point becomes a ScanRow; numerical failures are recorded as a
status, never dropped, so collapse boundaries show up in the tables.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from .config import (
    DEFAULT_DELTA,
    DEFAULT_DT_IMAG,
    DEFAULT_GRID_HALF_WIDTH,
    DEFAULT_GRID_POINTS,
    DEFAULT_SCAN_SCHEMES,
    DEFAULT_TF_INVERSE,
)
from .errors import (
    CollapseError,
    ConfigError,
    DomainError,
    NoPositiveRoot,
    NumericalError,
    QuadratureFailure,
)
from .gpe import Grid, simulate_protocol
from .metrics import (
    fit_log_slope,
    max_relative_width_deviation,
    time_averaged_energy,
    time_averaged_energy_direct,
    unattainability_model,
)
from .models import DesignReport, Model, PhysicalParams, ScanRow, ScanStatus, Scheme
from .schemes import design
from .utils import logger


@dataclass
class GpeSettings:
    """Grid and step sizes for GPE runs."""

    grid_half_width: float = DEFAULT_GRID_HALF_WIDTH
    grid_points: int = DEFAULT_GRID_POINTS
    dt: Optional[float] = None
    dt_imag: float = DEFAULT_DT_IMAG

    @property
    def grid(self) -> Grid:
        return Grid(self.grid_half_width, self.grid_points)

    def to_dict(self) -> dict:
        return {
            'grid_half_width': self.grid_half_width,
            'grid_points': self.grid_points,
            'dt': self.dt,
            'dt_imag': self.dt_imag,
        }


def _check_grid(name: str, values: Sequence[float], positive: bool = False) -> List[float]:
    values = [float(v) for v in values]
    if not values:
        raise ConfigError(f"{name} must not be empty")
    if any(not math.isfinite(v) for v in values):
        raise ConfigError(f"{name} must be finite")
    if positive and any(v <= 0 for v in values):
        raise ConfigError(f"{name} values must be positive, got {values}")
    if values != sorted(values):
        raise ConfigError(f"{name} must be sorted")
    return values


def _check_positive(name: str, value: float) -> float:
    return _check_grid(name, [value], positive=True)[0]


@dataclass
class ScanSpec:
    """What to scan: schemes and the three parameter grids."""

    schemes: List[Scheme] = field(default_factory=lambda: list(DEFAULT_SCAN_SCHEMES))
    gn_grid: List[float] = field(default_factory=lambda: [0.0])
    delta_grid: List[float] = field(default_factory=lambda: [DEFAULT_DELTA])
    gamma_grid: List[float] = field(default_factory=lambda: [10.0])
    gpe: bool = False
    output_path: Optional[str] = None
    t_f_inverse: float = DEFAULT_TF_INVERSE

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("scheme set must not be empty")
        self.schemes = [Scheme(s) for s in self.schemes]
        self.gn_grid = _check_grid('gn_grid', self.gn_grid)
        self.delta_grid = _check_grid('delta_grid', self.delta_grid, positive=True)
        self.gamma_grid = _check_grid('gamma_grid', self.gamma_grid, positive=True)

    def to_dict(self) -> dict:
        return {
            'schemes': [s.value for s in self.schemes],
            'gn_grid': self.gn_grid,
            'delta_grid': self.delta_grid,
            'gamma_grid': self.gamma_grid,
            'gpe': self.gpe,
            't_f_inverse': self.t_f_inverse,
        }


def _status_for(error: NumericalError) -> ScanStatus:
    if isinstance(error, (CollapseError, NoPositiveRoot)):
        return ScanStatus.COLLAPSE
    if isinstance(error, QuadratureFailure):
        return ScanStatus.QUADRATURE_FAILURE
    return ScanStatus.NUMERICAL_FAILURE


def _guarded(compute: Callable[[ScanRow], None], row: ScanRow) -> ScanRow:
    """Run compute(row); a numerical failure turns into the row's status."""
    try:
        compute(row)
    except NumericalError as e:
        row.status = _status_for(e)
        row.message = str(e)
        logger.warning(
            f"Scan point gN={row.g_n:g}, gamma={row.gamma:g}, delta={row.delta:g} "
            f"({row.scheme}): {row.status.value}: {e}"
        )
    return row


def _map(func: Callable, items: Iterable, workers: int = 1) -> list:
    """Map preserving input order whatever the completion order."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def _attach_gpe(row: ScanRow, report: DesignReport, settings: GpeSettings) -> None:
    """Run the design through the GPE; adds fidelity and the width deviation to row."""
    params = report.params
    result, _, value = simulate_protocol(
        report.protocol, params.g_n, params.u_initial, params.u_final, settings.grid,
        dt=settings.dt, dt_imag=settings.dt_imag, delta=params.delta,
    )
    row.fidelity = value
    row.extra['max_width_deviation'] = max_relative_width_deviation(
        result.times, result.widths, report.trajectory
    )


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------

def scan_min_time(
    gamma: float,
    gn_grid: Sequence[float],
    delta_grid: Sequence[float],
    model: Model = Model.GENERALIZED,
    workers: int = 1,
    gpe_settings: Optional[GpeSettings] = None,
) -> List[ScanRow]:
    """
    Bang-bang minimal time on the (gN, delta) grid, gN outer, delta inner.

    With gpe_settings every design is also simulated.
    """
    gamma = _check_positive('gamma', gamma)
    gn_grid = _check_grid('gn_grid', gn_grid)
    delta_grid = _check_grid('delta_grid', delta_grid, positive=True)

    def point(item) -> ScanRow:
        g_n, delta = item
        row = ScanRow(g_n=g_n, gamma=gamma, delta=delta, scheme=Scheme.BANG_BANG.value, model=Model(model).value)

        def compute(r: ScanRow):
            report = design(Scheme.BANG_BANG, PhysicalParams(g_n, gamma, delta, model))
            r.t_f = report.t_f
            r.energy = time_averaged_energy(report.trajectory, g_n)
            r.extra = {k: report.aux.get(k) for k in ('t1', 't2', 'x1_B')}
            if gpe_settings is not None:
                _attach_gpe(r, report, gpe_settings)

        return _guarded(compute, row)

    rows = _map(point, [(g, d) for g in gn_grid for d in delta_grid], workers)
    logger.info(f"Min-time scan: {len(rows)} points, {sum(r.ok for r in rows)} OK")
    return rows


def scan_energy(
    schemes: Sequence[Scheme],
    gn_grid: Sequence[float],
    gamma: float,
    delta: float = DEFAULT_DELTA,
    t_f_inverse: float = DEFAULT_TF_INVERSE,
    workers: int = 1,
    gpe_settings: Optional[GpeSettings] = None,
) -> List[ScanRow]:
    """Time-averaged excitation energy per scheme and gN (scheme outer)."""
    gamma = _check_positive('gamma', gamma)
    delta = _check_positive('delta', delta)
    gn_grid = _check_grid('gn_grid', gn_grid)

    def point(item) -> ScanRow:
        scheme, g_n = item
        row = ScanRow(g_n=g_n, gamma=gamma, delta=delta, scheme=scheme.value, model=Model.GENERALIZED.value)

        def compute(r: ScanRow):
            params = PhysicalParams(g_n, gamma, delta)
            report = design(scheme, params, t_f=t_f_inverse)
            r.t_f = report.t_f
            r.energy = time_averaged_energy(report.trajectory, g_n)
            r.extra = {'energy_direct': time_averaged_energy_direct(report.trajectory, report.params)}
            if gpe_settings is not None:
                _attach_gpe(r, report, gpe_settings)

        return _guarded(compute, row)

    rows = _map(point, [(Scheme(s), g) for s in schemes for g in gn_grid], workers)
    logger.info(f"Energy scan: {len(rows)} points, {sum(r.ok for r in rows)} OK")
    return rows


def scan_fidelity(
    schemes: Sequence[Scheme],
    gn_grid: Sequence[float],
    gamma: float,
    gpe_settings: Optional[GpeSettings] = None,
    delta: float = DEFAULT_DELTA,
    t_f_inverse: float = DEFAULT_TF_INVERSE,
    workers: int = 1,
) -> List[ScanRow]:
    """
    GPE fidelity against the final-trap ground state per scheme and gN.

    Each row also carries the largest relative deviation between the GPE width
    and the designed width trajectory.
    """
    gamma = _check_positive('gamma', gamma)
    delta = _check_positive('delta', delta)
    gn_grid = _check_grid('gn_grid', gn_grid)
    settings = gpe_settings or GpeSettings()

    def point(item) -> ScanRow:
        scheme, g_n = item
        row = ScanRow(g_n=g_n, gamma=gamma, delta=delta, scheme=scheme.value, model=Model.GENERALIZED.value)

        def compute(r: ScanRow):
            report = design(scheme, PhysicalParams(g_n, gamma, delta), t_f=t_f_inverse)
            r.t_f = report.t_f
            r.energy = time_averaged_energy(report.trajectory, g_n)
            _attach_gpe(r, report, settings)

        return _guarded(compute, row)

    rows = _map(point, [(Scheme(s), g) for s in schemes for g in gn_grid], workers)
    logger.info(f"Fidelity scan: {len(rows)} points, {sum(r.ok for r in rows)} OK")
    return rows


def unattainability_curve(
    g_n: Union[float, Sequence[float]],
    delta: float,
    gamma_grid: Sequence[float],
    workers: int = 1,
) -> List[ScanRow]:
    """
    Bang-bang minimal time against ln(gamma) for the generalized model at each
    g_n, the ordinary model and the Thomas-Fermi model, with the ln(a_f) + pi/4 curve.
    """
    gn_grid = _check_grid('gn_grid', [g_n] if np.isscalar(g_n) else g_n)
    delta = _check_positive('delta', delta)
    gamma_grid = _check_grid('gamma_grid', gamma_grid, positive=True)
    variants = [(Scheme.BANG_BANG, Model.GENERALIZED, g) for g in gn_grid] + [
        (Scheme.BANG_BANG, Model.ORDINARY, 0.0),
        (Scheme.BANG_BANG_TF, Model.THOMAS_FERMI, 0.0),
    ]

    def point(item) -> ScanRow:
        (scheme, model, gn), gamma = item
        row = ScanRow(g_n=gn, gamma=gamma, delta=delta, scheme=scheme.value, model=model.value)

        def compute(r: ScanRow):
            report = design(scheme, PhysicalParams(gn, gamma, delta, model))
            r.t_f = report.t_f
            a_f = report.aux['a_f']
            r.extra = {
                'log_gamma': math.log(gamma),
                'log_omega_ratio': -2.0 * math.log(gamma),
                'a_f': a_f,
                'model_curve': float(unattainability_model(a_f)),
            }

        return _guarded(compute, row)

    rows = _map(point, [(v, g) for v in variants for g in gamma_grid], workers)
    logger.info(f"Unattainability scan: {len(rows)} points, {sum(r.ok for r in rows)} OK")
    return rows


def fit_rows_log_slope(
    rows: Sequence[ScanRow],
    model: Model,
    gamma_min: float = 0.0,
    gamma_max: float = math.inf,
    g_n: Optional[float] = None,
    delta: Optional[float] = None,
):
    """Fit t_f against ln(gamma) over the OK rows of one model (optionally one gN and delta)."""
    selected = [
        r for r in rows
        if r.ok and r.model == Model(model).value and gamma_min <= r.gamma <= gamma_max
        and (g_n is None or r.g_n == g_n) and (delta is None or r.delta == delta)
    ]
    return fit_log_slope([r.gamma for r in selected], [r.t_f for r in selected])


def fit_unattainability(rows: Sequence[ScanRow]) -> Dict[str, Dict[str, float]]:
    """
    Slope and intercept per curve. A curve is keyed by its model name when the
    model has a single (gN, delta) curve, else by model, gN and delta.
    """
    curves: Dict[Model, List[tuple]] = {}
    for r in rows:
        key = (r.g_n, r.delta)
        bucket = curves.setdefault(Model(r.model), [])
        if key not in bucket:
            bucket.append(key)

    fits: Dict[str, Dict[str, float]] = {}
    for model, keys in curves.items():
        for g_n, delta in keys:
            name = model.value if len(keys) == 1 else f"{model.value} gN={g_n:g} delta={delta:g}"
            try:
                slope, intercept = fit_rows_log_slope(rows, model, g_n=g_n, delta=delta)
            except DomainError as e:
                logger.warning(f"No slope fit for {name}: {e}")
                continue
            fits[name] = {'slope': slope, 'intercept': intercept}
    return fits


def run_scan(scan_type: str, spec: ScanSpec, gpe_settings: Optional[GpeSettings] = None, workers: int = 1) -> List[ScanRow]:
    """
    Dispatch a scan type over every point of spec's grids.

    Axes a scan does not sweep itself are looped here, gamma outermost, so no
    requested point is dropped. GPE runs are added when spec.gpe is set.
    """
    settings = (gpe_settings or GpeSettings()) if spec.gpe else None
    rows: List[ScanRow] = []
    if scan_type == 'min-time':
        for gamma in spec.gamma_grid:
            rows += scan_min_time(gamma, spec.gn_grid, spec.delta_grid, workers=workers, gpe_settings=settings)
    elif scan_type == 'energy':
        for gamma in spec.gamma_grid:
            for delta in spec.delta_grid:
                rows += scan_energy(spec.schemes, spec.gn_grid, gamma, delta, spec.t_f_inverse, workers, settings)
    elif scan_type == 'fidelity':
        for gamma in spec.gamma_grid:
            for delta in spec.delta_grid:
                rows += scan_fidelity(spec.schemes, spec.gn_grid, gamma, gpe_settings, delta, spec.t_f_inverse, workers)
    elif scan_type == 'unattainability':
        for delta in spec.delta_grid:
            rows += unattainability_curve(spec.gn_grid, delta, spec.gamma_grid, workers)
    else:
        raise ConfigError(f"unknown scan type {scan_type!r}")
    return rows
