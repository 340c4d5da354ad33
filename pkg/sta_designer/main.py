"""
Main orchestrator for the STA designer.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .config import (
    DEFAULT_ATOL,
    DEFAULT_RTOL,
    DEFAULT_TF_INVERSE,
    GROUND_STATE_TOL,
    NORM_DRIFT_TOL,
    QUAD_RTOL,
    VERIFY_TOL,
    RunConfig,
)
from .ermakov import to_seconds
from .errors import ConfigError
from .gpe import Grid, simulate_protocol
from .metrics import max_relative_width_deviation, taylor_width_audit, time_averaged_energy
from .models import DesignReport, Model, ScanRow, VerificationSummary
from .output import (
    load_protocol_csv,
    load_report,
    save_json,
    save_manifest,
    save_observables_csv,
    save_protocol_csv,
    save_report,
    save_scan,
    save_snapshots,
    save_trajectory_csv,
)
from .scan import GpeSettings, ScanSpec, fit_unattainability, run_scan
from .schemes import design
from .utils import logger
from .verification import verify_protocol


class STARunner:
    """Dispatches one CLI command and writes its artifacts."""

    def __init__(self, config: RunConfig):
        """
        Initialize the runner.

        Args:
            config: validated run configuration
        """
        self.config = config
        self.output_dir = Path(config.output_dir)
        self.verbose = config.verbose

        # Set logging level
        if self.verbose:
            logger.setLevel(logging.DEBUG)

        self.report: Optional[DesignReport] = None
        self.verification: Optional[VerificationSummary] = None
        self.rows: List[ScanRow] = []
        self.artifacts: Dict[str, str] = {}
        self.stats: Dict[str, object] = {}

    def run(self) -> int:
        """
        Run the configured command.

        Returns:
            Process exit status (verify: 0 on PASS, 1 on FAIL; otherwise 0)
        """
        command = self.config.command
        logger.info(f"Running '{command}' into {self.output_dir}")
        if command == 'design':
            self._design()
        elif command == 'simulate':
            self._design()
            self._simulate()
        elif command == 'scan':
            self._scan()
        else:
            return 0 if self._verify() else 1
        return 0

    # ------------------------------------------------------------------

    def _design(self):
        config = self.config
        params = config.to_params()
        report = design(config.scheme, params, t_f=config.t_f, omega0_hz=config.omega0_hz)
        self.report = report

        g_n = report.params.g_n if report.params.model is Model.GENERALIZED else 0.0
        self.stats['energy'] = time_averaged_energy(report.trajectory, g_n)
        extra = {'time_averaged_energy': self.stats['energy']}
        if report.params.model is Model.GENERALIZED:
            extra['taylor_width'] = taylor_width_audit(params.g_n, params.gamma, exact=report.aux['a_f'])

        self.artifacts['report'] = save_report(report, self.output_dir / 'report.json', extra)
        self.artifacts['protocol'] = save_protocol_csv(report.protocol, self.output_dir / 'protocol.csv')
        self.artifacts['trajectory'] = save_trajectory_csv(report.trajectory, self.output_dir / 'trajectory.csv')

    def _simulate(self):
        config = self.config
        report = self.report
        params = report.params
        grid = Grid(config.grid_half_width, config.grid_points)
        grid.check_hosts(report.aux['a_i'], report.aux['a_f'])

        snapshot_times = config.snapshot_times or [0.0, report.t_f]
        result, target, value = simulate_protocol(
            report.protocol, params.g_n, params.u_initial, params.u_final, grid,
            dt=config.dt, dt_imag=config.dt_imag, record_stride=config.record_stride,
            snapshot_times=snapshot_times, delta=params.delta,
        )
        self.stats['fidelity'] = value
        self.stats['max_width_deviation'] = max_relative_width_deviation(
            result.times, result.widths, report.trajectory
        )

        self.artifacts['observables'] = save_observables_csv(result.observables, self.output_dir / 'observables.csv')
        self.artifacts['snapshots'] = save_snapshots(grid.x, result.snapshots, self.output_dir / 'snapshots.csv')
        self.artifacts['simulation'] = save_json(
            {
                'fidelity': value,
                'max_width_deviation': self.stats['max_width_deviation'],
                'steps': result.n_steps,
                'grid': {'half_width': grid.half_width, 'n_points': grid.n_points},
                'dt': config.dt,
                'dt_imag': config.dt_imag,
            },
            self.output_dir / 'simulation.json',
        )

    def _scan(self):
        config = self.config
        spec = ScanSpec(
            schemes=config.schemes,
            gn_grid=config.gn_grid,
            delta_grid=config.delta_grid,
            gamma_grid=config.gamma_grid,
            gpe=config.gpe or config.scan_type == 'fidelity',
            output_path=str(self.output_dir),
            t_f_inverse=config.t_f or DEFAULT_TF_INVERSE,
        )
        settings = GpeSettings(config.grid_half_width, config.grid_points, config.dt, config.dt_imag)
        self.rows = run_scan(config.scan_type, spec, settings, workers=config.workers)

        csv_path, excel_path = save_scan(self.rows, config.scan_type, self.output_dir)
        self.artifacts['scan_csv'] = csv_path
        self.artifacts['scan_excel'] = excel_path

        manifest = {
            'scan_type': config.scan_type,
            'spec': spec.to_dict(),
            'gpe_settings': settings.to_dict() if spec.gpe else None,
            'tolerances': {
                'ode_rtol': DEFAULT_RTOL,
                'ode_atol': DEFAULT_ATOL,
                'quadrature_rtol': QUAD_RTOL,
                'ground_state_tol': GROUND_STATE_TOL,
                'norm_drift_tol': NORM_DRIFT_TOL,
            },
            'version': __version__,
        }
        if config.scan_type == 'unattainability':
            manifest['fits'] = fit_unattainability(self.rows)
        self.stats['manifest'] = manifest
        self.artifacts['manifest'] = save_manifest(self.output_dir, manifest)

    def _verify(self) -> bool:
        config = self.config
        if config.report:
            report = load_report(config.report)
            params = report.params
        elif config.protocol:
            params = config.to_params()
            protocol = load_protocol_csv(config.protocol)
            report = DesignReport(scheme=config.scheme, params=params, protocol=protocol, t_f=protocol.t_f)
        else:
            raise ConfigError("verify needs --report or --protocol")

        self.report = report
        self.verification = verify_protocol(report, params, tol=VERIFY_TOL, rtol=config.rtol)
        self.artifacts['verification'] = save_json(self.verification.to_dict(), self.output_dir / 'verification.json')
        return self.verification.passed

    # ------------------------------------------------------------------

    def print_summary(self):
        """Print run summary to console."""
        config = self.config
        print("\n" + "=" * 60)
        print(f"STA DESIGNER - {config.command.upper()} SUMMARY")
        print("=" * 60)

        if self.report is not None:
            report = self.report
            params = report.params
            print(f"\nScheme: {report.scheme.value}  (model: {params.model.value})")
            print(f"  gN={params.g_n:g}, gamma={params.gamma:g}, delta={params.delta:g}")
            print(f"  t_f = {report.t_f:.6f}")
            if report.t_f_seconds is not None:
                print(f"  t_f = {report.t_f_seconds:.6g} s")
            elif config.omega0_hz:
                print(f"  t_f = {to_seconds(report.t_f, config.omega0_hz):.6g} s")
            for key, value in sorted(report.aux.items()):
                print(f"  {key}: {value:.6g}")
            if report.extrapolated:
                print("  (compression: extrapolated)")

        if 'energy' in self.stats:
            print(f"\n  Time-averaged energy: {self.stats['energy']:.6f}")
        if 'fidelity' in self.stats:
            print(f"  Fidelity: {self.stats['fidelity']:.8f}")
            print(f"  Max width deviation: {self.stats['max_width_deviation']:.3e}")

        if self.verification is not None:
            v = self.verification
            print(f"\n--- Verification: {'PASS' if v.passed else 'FAIL'} ---")
            print(f"  |a(t_f) - a_f| = {v.endpoint_residual_a:.3e}")
            print(f"  |a'(t_f)|      = {v.endpoint_residual_a_dot:.3e}")
            for idx, drift in enumerate(v.first_integral_drift):
                if drift is not None:
                    print(f"  segment {idx} first-integral drift = {drift:.3e}")

        if self.rows:
            print(f"\n--- Scan ({config.scan_type}) ---")
            print(f"  Points: {len(self.rows)}")
            statuses: Dict[str, int] = {}
            for row in self.rows:
                statuses[row.status.value] = statuses.get(row.status.value, 0) + 1
            for status, count in sorted(statuses.items()):
                print(f"  {status}: {count}")
            for model, fit in sorted(self.stats.get('manifest', {}).get('fits', {}).items()):
                print(f"  {model}: slope={fit['slope']:.4f}, intercept={fit['intercept']:.4f}")

        if self.artifacts:
            print("\nResults saved to:")
            for name, path in self.artifacts.items():
                print(f"  {name}: {path}")

        print("\n" + "=" * 60)


def run_command(config: RunConfig) -> int:
    """
    Main entry point for running one command.

    Args:
        config: validated run configuration

    Returns:
        Process exit status
    """
    runner = STARunner(config)
    status = runner.run()
    runner.print_summary()
    return status
