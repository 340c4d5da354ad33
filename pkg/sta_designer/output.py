"""
Output generation for CSV, Excel and JSON files.
"""

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils.dataframe import dataframe_to_rows

from .config import CONSTANT_SEGMENT_SAMPLES, CSV_FLOAT_FORMAT
from .errors import ConfigError, NumericalError
from .models import (
    ConstantU,
    DesignReport,
    ErmakovTrajectory,
    SampledU,
    ScanRow,
    Segment,
    TrapProtocol,
)
from .utils import logger, round_floats

BASE_SCAN_COLUMNS = ['scheme', 'model', 'g_n', 'gamma', 'delta', 't_f', 'energy', 'fidelity']

# Column order per scan type; status and message always close the row
SCAN_COLUMNS = {
    'min-time': BASE_SCAN_COLUMNS + ['t1', 't2', 'x1_B', 'max_width_deviation'],
    'energy': BASE_SCAN_COLUMNS + ['energy_direct', 'max_width_deviation'],
    'fidelity': BASE_SCAN_COLUMNS + ['max_width_deviation'],
    'unattainability': BASE_SCAN_COLUMNS + ['log_gamma', 'log_omega_ratio', 'a_f', 'model_curve'],
}

PROTOCOL_COLUMNS = ['t', 'u', 'segment']
TRAJECTORY_COLUMNS = ['t', 'a', 'a_dot', 'a_ddot', 'b', 'u', 'segment']


def _prepare(path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def save_csv(df: pd.DataFrame, output_path) -> str:
    """
    Save a DataFrame to CSV with a header row and 12 significant digits.

    Returns:
        The actual path written to
    """
    output_path = _prepare(output_path)
    df.to_csv(output_path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info(f"Saved CSV file: {output_path}")
    return str(output_path)


def save_excel(df: pd.DataFrame, output_path, title: str = "Scan Results") -> str:
    """
    Save a DataFrame to an Excel file with formatting.

    Args:
        df: table to write
        output_path: Path to output Excel file
        title: worksheet title

    Returns:
        The actual path written to
    """
    output_path = _prepare(output_path)

    wb = Workbook()
    ws = wb.active
    ws.title = title

    # Header style
    header_font = Font(bold=True, color="FFFFFF")
    header_fill = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
    header_alignment = Alignment(horizontal="center", vertical="center", wrap_text=True)
    thin_border = Border(
        left=Side(style='thin'),
        right=Side(style='thin'),
        top=Side(style='thin'),
        bottom=Side(style='thin')
    )

    clean = df.astype(object).where(pd.notna(df), None)
    for r_idx, row in enumerate(dataframe_to_rows(clean, index=False, header=True), 1):
        for c_idx, value in enumerate(row, 1):
            cell = ws.cell(row=r_idx, column=c_idx, value=value)
            if r_idx == 1:
                cell.font = header_font
                cell.fill = header_fill
                cell.alignment = header_alignment
            cell.border = thin_border

    for col_idx, col_name in enumerate(df.columns, 1):
        width = 40 if col_name == 'message' else 16
        ws.column_dimensions[ws.cell(row=1, column=col_idx).column_letter].width = width

    # Freeze header row
    ws.freeze_panes = 'A2'
    ws.auto_filter.ref = ws.dimensions

    wb.save(output_path)
    logger.info(f"Saved Excel file: {output_path}")
    return str(output_path)


def save_json(data: dict, output_path) -> str:
    """Write a JSON document with sorted keys and 12-digit floats."""
    output_path = _prepare(output_path)
    output_path.write_text(json.dumps(round_floats(data), indent=2, sort_keys=True) + "\n")
    logger.info(f"Saved JSON file: {output_path}")
    return str(output_path)


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------

def rows_to_dataframe(rows: Sequence[ScanRow], scan_type: str) -> pd.DataFrame:
    """Convert scan rows to a DataFrame with the fixed header of the scan type."""
    if scan_type not in SCAN_COLUMNS:
        raise ConfigError(f"unknown scan type {scan_type!r}")
    columns = SCAN_COLUMNS[scan_type] + ['status', 'message']
    df = pd.DataFrame([row.to_dict() for row in rows])
    return df.reindex(columns=columns)


def save_scan(rows: Sequence[ScanRow], scan_type: str, output_dir) -> tuple:
    """
    Save scan rows to scan.csv and scan.xlsx in output_dir.

    Returns:
        Tuple of (csv_path, excel_path)
    """
    df = rows_to_dataframe(rows, scan_type)
    output_dir = Path(output_dir)
    csv_path = save_csv(df, output_dir / 'scan.csv')
    excel_path = save_excel(df, output_dir / 'scan.xlsx', title=scan_type)
    return csv_path, excel_path


def save_manifest(output_dir, manifest: dict) -> str:
    """Record what a scan ran with: type, grids, tolerances, GPE settings, version."""
    return save_json(manifest, Path(output_dir) / 'manifest.json')


# ---------------------------------------------------------------------------
# Protocols, trajectories and reports
# ---------------------------------------------------------------------------

def protocol_to_dataframe(protocol: TrapProtocol, constant_samples: int = CONSTANT_SEGMENT_SAMPLES) -> pd.DataFrame:
    """Sample u(t) per segment; edges appear once per adjacent segment."""
    frames = []
    offset = 0.0
    for idx, segment in enumerate(protocol.segments):
        if isinstance(segment.control, SampledU):
            local = segment.control.times
            values = segment.control.values
        else:
            local = np.linspace(0.0, segment.duration, constant_samples)
            values = np.full(local.size, segment.control.value)
        frames.append(pd.DataFrame({'t': offset + local, 'u': values, 'segment': idx}))
        offset += segment.duration
    if not frames:
        return pd.DataFrame(columns=PROTOCOL_COLUMNS)
    return pd.concat(frames, ignore_index=True)[PROTOCOL_COLUMNS]


def save_protocol_csv(protocol: TrapProtocol, output_path) -> str:
    return save_csv(protocol_to_dataframe(protocol), output_path)


def load_protocol_csv(path) -> TrapProtocol:
    """
    Rebuild a protocol from protocol.csv. A segment whose samples all share one
    value becomes a constant plateau; anything else is a sampled control.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"protocol file not found: {path}")
    df = pd.read_csv(path)
    missing = set(PROTOCOL_COLUMNS) - set(df.columns)
    if missing:
        raise ConfigError(f"{path}: missing columns {sorted(missing)}")

    segments: List[Segment] = []
    for _, group in df.groupby('segment', sort=True):
        t = group['t'].to_numpy(dtype=float)
        u = group['u'].to_numpy(dtype=float)
        local = t - t[0]
        duration = float(local[-1])
        try:
            if np.all(u == u[0]):
                segments.append(Segment(duration, ConstantU(float(u[0]))))
            else:
                segments.append(Segment(duration, SampledU(local, u)))
        except NumericalError as e:
            raise ConfigError(f"{path}: malformed segment ({e})") from e
    return TrapProtocol(segments)


def save_trajectory_csv(trajectory: ErmakovTrajectory, output_path) -> str:
    df = pd.DataFrame(trajectory.to_dict())[TRAJECTORY_COLUMNS]
    return save_csv(df, output_path)


def save_observables_csv(observables: pd.DataFrame, output_path) -> str:
    return save_csv(observables, output_path)


def save_snapshots(x: np.ndarray, snapshots: Dict[float, np.ndarray], output_path) -> str:
    """Density snapshots as columns: x, then one |psi|^2 column per time."""
    data = {'x': x}
    for t in sorted(snapshots):
        data[f"t={t:.12g}"] = snapshots[t]
    return save_csv(pd.DataFrame(data), output_path)


def save_report(report: DesignReport, output_path, extra: Optional[dict] = None) -> str:
    data = report.to_dict()
    if extra:
        data.update(extra)
    return save_json(data, output_path)


def load_report(path) -> DesignReport:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"report file not found: {path}")
    try:
        data = json.loads(path.read_text())
        return DesignReport.from_dict(data)
    except (json.JSONDecodeError, KeyError, ValueError, NumericalError) as e:
        raise ConfigError(f"{path}: not a design report ({e})") from e
