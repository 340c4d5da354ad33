"""
Configuration constants, defaults and the validated run configuration.
"""

import math
import os
from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError
from .models import Model, PhysicalParams, Scheme

# Default physical problem
DEFAULT_GN = 0.0
DEFAULT_GAMMA = 10.0
DEFAULT_DELTA = 1.0
DEFAULT_TF_INVERSE = 5.45

# Width floor below which the condensate is considered collapsed
COLLAPSE_FLOOR = 1e-6

# Root solving
ROOT_RESIDUAL_TOL = 1e-12
ROOT_MAX_EXPANSIONS = 60

# Ermakov integration
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
ODE_METHOD = 'DOP853'
TRAJECTORY_POINTS_PER_SEGMENT = 801

# Turning-point quadrature
QUAD_RTOL = 1e-11
QUAD_LIMIT = 200
QUAD_INTERIOR_SAMPLES = 401

# Protocol sampling
INVERSE_SAMPLES = 2001
CONSTANT_SEGMENT_SAMPLES = 101

# Verification
VERIFY_TOL = 1e-5

# GPE simulation
DEFAULT_GRID_HALF_WIDTH = 128.0
DEFAULT_GRID_POINTS = 4096
MIN_GRID_POINTS = 256
ALIASING_FACTOR = 8.0
DEFAULT_DT_IMAG = 1e-3
GROUND_STATE_TOL = 1e-12
MAX_IMAG_STEPS = 200_000
MIN_IMAG_STEPS = 10
IMAG_RETRY_ATTEMPTS = 3
NORM_DRIFT_TOL = 1e-6
DT_SAFETY = 0.01
DEFAULT_RECORD_STRIDE = 10

# Output
CSV_FLOAT_FORMAT = '%.12g'
DEFAULT_OUTPUT_DIR = 'sta_output'
OUTPUT_DIR_ENV = 'STA_OUTPUT_DIR'

SCAN_TYPES = ('min-time', 'fidelity', 'energy', 'unattainability')
DEFAULT_SCAN_SCHEMES = [Scheme.INVERSE_ENGINEERING, Scheme.TWO_JUMP, Scheme.BANG_BANG]


def get_output_dir(cli_value: Optional[str] = None) -> str:
    """Get output directory from CLI argument, environment variable, or default."""
    if cli_value:
        return cli_value
    return os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR


def read_config_file(path: str) -> Dict[str, str]:
    """
    Read a flat `key = value` configuration file.

    Blank lines and lines starting with '#' are ignored. Keys may use dashes or
    underscores; values are kept as strings and typed by RunConfig.
    """
    values: Dict[str, str] = {}
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"config file not found: {path}")

    for lineno, raw in enumerate(file_path.read_text().splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split('=', 1)
        key = key.strip().replace('-', '_')
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(',') if item.strip()]
    return value


class RunConfig(BaseModel):
    """Strictly validated run configuration; unknown keys are rejected."""

    model_config = ConfigDict(extra='forbid', use_enum_values=False)

    command: Literal['design', 'simulate', 'scan', 'verify']

    # Physical problem
    g_n: float = DEFAULT_GN
    gamma: float = Field(DEFAULT_GAMMA, gt=0)
    delta: float = Field(DEFAULT_DELTA, gt=0)
    model: Model = Model.GENERALIZED
    scheme: Scheme = Scheme.BANG_BANG
    t_f: Optional[float] = Field(None, gt=0)
    omega0_hz: Optional[float] = Field(None, gt=0)
    rtol: float = Field(DEFAULT_RTOL, gt=0, lt=1e-3)

    # GPE settings
    grid_half_width: float = Field(DEFAULT_GRID_HALF_WIDTH, gt=0)
    grid_points: int = Field(DEFAULT_GRID_POINTS, ge=MIN_GRID_POINTS)
    dt: Optional[float] = Field(None, gt=0)
    dt_imag: float = Field(DEFAULT_DT_IMAG, gt=0)
    record_stride: int = Field(DEFAULT_RECORD_STRIDE, ge=1)
    snapshot_times: List[float] = Field(default_factory=list)

    # Scans
    scan_type: Literal['min-time', 'fidelity', 'energy', 'unattainability'] = 'min-time'
    gn_grid: List[float] = Field(default_factory=lambda: [DEFAULT_GN])
    delta_grid: List[float] = Field(default_factory=lambda: [DEFAULT_DELTA])
    gamma_grid: List[float] = Field(default_factory=lambda: [DEFAULT_GAMMA])
    schemes: List[Scheme] = Field(default_factory=lambda: list(DEFAULT_SCAN_SCHEMES))
    gpe: bool = False
    workers: int = Field(1, ge=1)

    # Verification inputs
    report: Optional[str] = None
    protocol: Optional[str] = None

    output_dir: str = DEFAULT_OUTPUT_DIR
    verbose: bool = False

    @field_validator('snapshot_times', 'gn_grid', 'delta_grid', 'gamma_grid', 'schemes', mode='before')
    @classmethod
    def _comma_lists(cls, value):
        return _split_list(value)

    @field_validator('gn_grid', 'delta_grid', 'gamma_grid', 'snapshot_times')
    @classmethod
    def _finite_sorted(cls, value: List[float], info):
        if info.field_name != 'snapshot_times' and not value:
            raise ValueError("grid must not be empty")
        if any(not math.isfinite(v) for v in value):
            raise ValueError("grid values must be finite")
        return sorted(value)

    @field_validator('delta_grid', 'gamma_grid')
    @classmethod
    def _positive(cls, value: List[float], info):
        if any(v <= 0 for v in value):
            raise ValueError(f"{info.field_name} values must be positive, got {value}")
        return value

    @field_validator('grid_points')
    @classmethod
    def _power_of_two(cls, value: int):
        if value & (value - 1):
            raise ValueError(f"grid_points must be a power of two, got {value}")
        return value

    def to_params(self) -> PhysicalParams:
        """Build PhysicalParams, converting validation failures into ConfigError."""
        try:
            return PhysicalParams(g_n=self.g_n, gamma=self.gamma, delta=self.delta, model=self.model)
        except ValueError as e:
            raise ConfigError(str(e)) from e


def build_run_config(command: str, file_values: Dict[str, str], overrides: Dict[str, object]) -> RunConfig:
    """
    Merge config-file values with CLI overrides (CLI wins) and validate.

    Raises:
        ConfigError: on unknown keys or invalid values
    """
    merged: Dict[str, object] = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    merged['command'] = command
    merged['output_dir'] = get_output_dir(merged.get('output_dir'))
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e
