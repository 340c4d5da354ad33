"""
Derived quantities: excitation energy, perturbative widths and the minimal-time scaling law.
"""

import math
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson

from .ermakov import SQRT_2PI, effective_potential
from .errors import DomainError
from .models import ErmakovTrajectory, PhysicalParams


def _check_positive(a: np.ndarray) -> None:
    if np.any(a <= 0):
        raise DomainError("trajectory contains non-positive widths")


def _segment_average(trajectory: ErmakovTrajectory, integrand: np.ndarray) -> float:
    """Integrate piecewise over segments (jumps excluded from each rule) and divide by t_f."""
    if trajectory.times.size < 2 or trajectory.t_f == 0:
        return float(integrand[0])
    total = 0.0
    for idx in np.unique(trajectory.segment_index):
        mask = trajectory.segment_index == idx
        if mask.sum() < 2:
            continue
        total += simpson(integrand[mask], x=trajectory.times[mask])
    return float(total / trajectory.t_f)


def time_averaged_energy(trajectory: ErmakovTrajectory, g_n: float) -> float:
    """
    Mean excitation energy (1/t_f) int (a'^2 + 1/a^2 + 3 gN / (2 sqrt(2 pi) a)) dt.

    This is the time average of the effective energy after one integration by
    parts, valid when a' vanishes at both ends.
    """
    a = np.asarray(trajectory.a, dtype=float)
    _check_positive(a)
    integrand = trajectory.a_dot ** 2 + 1.0 / a ** 2 + 1.5 * g_n / (SQRT_2PI * a)
    return _segment_average(trajectory, integrand)


def time_averaged_energy_direct(trajectory: ErmakovTrajectory, params: PhysicalParams) -> float:
    """(1/t_f) int (a'^2/2 + U(a, u(t))) dt with the full effective energy."""
    a = np.asarray(trajectory.a, dtype=float)
    _check_positive(a)
    integrand = 0.5 * trajectory.a_dot ** 2 + effective_potential(a, trajectory.u, params.g_n, params.model)
    return _segment_average(trajectory, integrand)


def taylor_width_estimate(g_n: float, gamma: float) -> float:
    """First-order a_f around gN = 0: gamma + gN gamma^2 / (4 sqrt(2 pi))."""
    return gamma + g_n * gamma ** 2 / (4.0 * SQRT_2PI)


def printed_taylor_width(g_n: float, gamma: float) -> float:
    """The same expansion with the gN term scaled as (omega_0/omega_f)^(3/2) = gamma^3."""
    return gamma + g_n * gamma ** 3 / (4.0 * SQRT_2PI)


def taylor_width_audit(g_n: float, gamma: float, exact: Optional[float] = None) -> Dict[str, float]:
    """Both expansions side by side, with their distance from the exact root when given."""
    audit = {
        'implemented': taylor_width_estimate(g_n, gamma),
        'printed': printed_taylor_width(g_n, gamma),
    }
    if exact is not None:
        audit['exact'] = exact
        audit['implemented_error'] = abs(audit['implemented'] - exact)
        audit['printed_error'] = abs(audit['printed'] - exact)
    return audit


def unattainability_model(a_f):
    """Scaling-law curve ln(a_f) + pi/4."""
    return np.log(a_f) + math.pi / 4.0


def fit_log_slope(gammas: Sequence[float], t_f: Sequence[float]) -> Tuple[float, float]:
    """Least-squares line t_f = slope * ln(gamma) + intercept."""
    x = np.log(np.asarray(gammas, dtype=float))
    y = np.asarray(t_f, dtype=float)
    if x.size < 2:
        raise DomainError("need at least two points to fit a slope")
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)


def max_relative_width_deviation(
    times: Iterable[float],
    widths: Iterable[float],
    trajectory: ErmakovTrajectory,
) -> float:
    """max |w(t) - a(t)| / a(t) with a(t) interpolated from the width trajectory."""
    times = np.asarray(list(times), dtype=float)
    widths = np.asarray(list(widths), dtype=float)
    reference = np.interp(times, trajectory.times, trajectory.a)
    return float(np.max(np.abs(widths - reference) / reference))
