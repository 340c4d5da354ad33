"""
Utility functions for logging and number formatting.
"""

import logging
import math
from typing import Sequence

import numpy as np

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger('sta_designer')


def format_float(value: float, digits: int = 12) -> str:
    """Format a float with a fixed number of significant digits."""
    if value is None:
        return ""
    return f"{value:.{digits}g}"


def round_floats(obj, digits: int = 12):
    """
    Recursively round floats in a JSON-like structure to `digits` significant
    digits so serialized documents are byte-stable.
    """
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return obj
        return float(format_float(obj, digits))
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return [round_floats(float(v), digits) for v in obj.ravel()]
    if isinstance(obj, np.floating):
        return round_floats(float(obj), digits)
    return obj


def is_strictly_increasing(values: Sequence[float]) -> bool:
    """True if every element is larger than its predecessor."""
    arr = np.asarray(values, dtype=float)
    return arr.size < 2 or bool(np.all(np.diff(arr) > 0))
