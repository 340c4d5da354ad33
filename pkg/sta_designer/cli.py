"""
CLI interface for the STA designer.
"""

import argparse

from .config import OUTPUT_DIR_ENV, SCAN_TYPES, RunConfig, build_run_config, read_config_file
from .models import Model, Scheme


def _add_common(parser: argparse.ArgumentParser):
    """Options shared by every subcommand; defaults are None so the config file can supply them."""
    parser.add_argument(
        '--config', '-c',
        type=str,
        default=None,
        help='Flat key = value configuration file (command-line options win)'
    )

    # Physical problem
    parser.add_argument('--gn', dest='g_n', type=float, default=None,
                        help='Nonlinearity strength gN (negative = attractive; default: 0)')
    parser.add_argument('--gamma', type=float, default=None,
                        help='Expansion ratio gamma = sqrt(omega_0/omega_f) (default: 10)')
    parser.add_argument('--delta', type=float, default=None,
                        help='Bound delta on |omega^2(t)| (default: 1)')
    parser.add_argument('--model', type=str, default=None, choices=[m.value for m in Model],
                        help='Width equation (default: generalized)')
    parser.add_argument('--scheme', type=str, default=None, choices=[s.value for s in Scheme],
                        help='Protocol scheme (default: bang-bang)')
    parser.add_argument('--tf', dest='t_f', type=float, default=None,
                        help='Inverse-engineering duration (default: 5.45)')
    parser.add_argument('--omega0-hz', type=float, default=None,
                        help='Initial trap frequency omega_0/2pi in Hz, to report t_f in seconds')
    parser.add_argument('--rtol', type=float, default=None,
                        help='Relative tolerance of the width integrator (default: 1e-10)')

    # GPE
    parser.add_argument('--grid-half-width', type=float, default=None,
                        help='GPE box half width L (default: 128)')
    parser.add_argument('--grid-points', type=int, default=None,
                        help='GPE grid points, power of two (default: 4096)')
    parser.add_argument('--dt', type=float, default=None,
                        help='Real-time step (default: largest admissible)')
    parser.add_argument('--dt-imag', type=float, default=None,
                        help='Imaginary-time step (default: 1e-3)')
    parser.add_argument('--record-stride', type=int, default=None,
                        help='Record observables every N steps (default: 10)')
    parser.add_argument('--snapshot-times', type=str, default=None,
                        help='Comma-separated times for density snapshots (default: 0 and t_f)')

    # Scans
    parser.add_argument('--scan-type', type=str, default=None, choices=list(SCAN_TYPES),
                        help='Scan to run (default: min-time)')
    parser.add_argument('--gn-grid', type=str, default=None, help='Comma-separated gN values')
    parser.add_argument('--delta-grid', type=str, default=None, help='Comma-separated delta values')
    parser.add_argument('--gamma-grid', type=str, default=None, help='Comma-separated gamma values')
    parser.add_argument('--schemes', type=str, default=None,
                        help='Comma-separated schemes (default: inverse-engineering,two-jump,bang-bang)')
    parser.add_argument('--gpe', action='store_true', default=None,
                        help='Run GPE simulations in scans')
    parser.add_argument('--workers', type=int, default=None,
                        help='Parallel workers for scans (default: 1)')

    # Verification
    parser.add_argument('--report', type=str, default=None, help='report.json to verify')
    parser.add_argument('--protocol', type=str, default=None, help='protocol.csv to verify')

    parser.add_argument(
        '--output-dir', '-o',
        type=str,
        default=None,
        help=f'Output directory (or set {OUTPUT_DIR_ENV} env var; default: sta_output)'
    )
    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        default=None,
        help='Enable verbose logging'
    )


def parse_args(args=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog='sta',
        description='Design and verify shortcut-to-adiabaticity trap protocols for a 1D BEC.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  sta design --scheme two-jump --gn 0.01 --gamma 10
  sta design --scheme bang-bang --gn 0 --gamma 10 --delta 1
  sta verify --report sta_output/report.json
  sta simulate --scheme bang-bang --gn 0.01
  sta scan --scan-type min-time --gn-grid=-0.05,0,0.05 --delta-grid 1,2,4

Environment variables:
  {OUTPUT_DIR_ENV}            - Output directory
"""
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, help_text in [
        ('design', 'Design a protocol and write report.json, protocol.csv, trajectory.csv'),
        ('simulate', 'Design, then run the GPE and write observables and snapshots'),
        ('scan', 'Run a parameter scan and write scan.csv, scan.xlsx, manifest.json'),
        ('verify', 'Forward-integrate a report or protocol; exit 1 on FAIL'),
    ]:
        _add_common(subparsers.add_parser(name, help=help_text))

    return parser.parse_args(args)


def get_config_from_args(args) -> RunConfig:
    """
    Build the validated configuration from parsed arguments and the optional config file.

    Raises:
        ConfigError: on unknown keys or invalid values
    """
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {
        key: value for key, value in vars(args).items()
        if key not in ('command', 'config')
    }
    return build_run_config(args.command, file_values, overrides)
