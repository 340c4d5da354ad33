"""
Entry point for running the STA designer as a module.

Usage:
    python -m sta_designer design --scheme bang-bang --gn 0.01 --gamma 10
"""

import sys

from .cli import get_config_from_args, parse_args
from .errors import STAError
from .main import run_command


def main(argv=None) -> int:
    """Main entry point; returns the process exit status."""
    args = parse_args(argv)
    verbose = bool(args.verbose)

    try:
        config = get_config_from_args(args)
        verbose = config.verbose
        return run_command(config)
    except KeyboardInterrupt:
        print("\n\nInterrupted by user")
        return 130
    except STAError as e:
        print(f"\n✗ Error: {e}", file=sys.stderr)
        if verbose:
            import traceback
            traceback.print_exc()
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
