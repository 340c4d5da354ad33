"""
Simple script to run the STA designer directly from an IDE.
Just click "Run" or press the run button in your IDE.

Edit CONFIG below; any key of the command line (without the leading dashes,
with underscores) can be set here.
"""

import sys
import os

# Add this directory to path so imports work correctly
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from sta_designer.config import build_run_config
from sta_designer.errors import STAError
from sta_designer.main import run_command


# ============================================================
# CONFIGURATION - Modify these settings as needed
# ============================================================

CONFIG = {
    # One of: 'design', 'simulate', 'scan', 'verify'
    'command': 'design',

    # Nonlinearity gN (negative = attractive)
    'g_n': 0.01,

    # Expansion ratio gamma = sqrt(omega_0 / omega_f)
    'gamma': 10.0,

    # Bound on |omega^2(t)| for bang-bang protocols
    'delta': 1.0,

    # Options: 'inverse-engineering', 'two-jump', 'bang-bang',
    #          'bang-bang-tf', 'bang-bang-closed-form'
    'scheme': 'bang-bang',

    # Width equation: 'generalized', 'ordinary', 'thomas-fermi'
    'model': 'generalized',

    # Trap frequency in Hz, to also report t_f in seconds (None = skip)
    'omega0_hz': None,

    # Scan settings (command = 'scan')
    'scan_type': 'min-time',
    'gn_grid': [-0.05, 0.0, 0.05],
    'delta_grid': [1.0, 2.0, 4.0],

    # Output directory
    'output_dir': 'sta_output',

    # Verbose logging
    'verbose': True,
}


# ============================================================
# MAIN EXECUTION
# ============================================================

if __name__ == '__main__':
    print("=" * 60)
    print("STA DESIGNER - Starting...")
    print("=" * 60)

    settings = dict(CONFIG)
    command = settings.pop('command')

    try:
        config = build_run_config(command, {}, settings)
        status = run_command(config)
    except KeyboardInterrupt:
        print("\n\nInterrupted by user")
        sys.exit(130)
    except STAError as e:
        print(f"\n✗ Error: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(e.exit_code)

    print("\n" + "=" * 60)
    print("STA DESIGNER - Complete")
    print("=" * 60)
    sys.exit(status)
