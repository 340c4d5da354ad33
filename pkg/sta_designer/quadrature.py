"""
Travel-time integrals between turning points.

Every constant-control arc of the width dynamics obeys a'^2 = R(a), so the time
spent between two widths is the integral of da / sqrt(R(a)). R usually has a
simple zero at one or both limits (a turning point), which the substitution
a = lo + (hi - lo) sin^2(theta) removes.
"""

from typing import Callable

import numpy as np
from scipy.integrate import quad, tanhsinh

from .config import QUAD_INTERIOR_SAMPLES, QUAD_LIMIT, QUAD_RTOL
from .errors import QuadratureFailure
from .utils import logger

Radicand = Callable[[np.ndarray], np.ndarray]


def _check_interior(radicand: Radicand, lo: float, hi: float) -> None:
    theta = np.linspace(0.0, 0.5 * np.pi, QUAD_INTERIOR_SAMPLES + 2)[1:-1]
    x = lo + (hi - lo) * np.sin(theta) ** 2
    values = np.asarray(radicand(x), dtype=float)
    bad = np.flatnonzero(~(values > 0))
    if bad.size:
        location = float(x[bad[0]])
        raise QuadratureFailure(
            f"radicand is non-positive at x={location:.10g} inside ({lo:.10g}, {hi:.10g})",
            location=location,
        )


def singular_time_quadrature(
    radicand: Radicand,
    lo: float,
    hi: float,
    rtol: float = QUAD_RTOL,
) -> float:
    """
    Integral of dx / sqrt(radicand(x)) between lo and hi.

    The limits may come in either order; the result is always the (positive)
    travel time. The radicand must be vectorized over numpy arrays.

    Adaptive Gauss-Kronrod on the regularized integrand first; if QUADPACK
    reports trouble (a non-simple zero at a limit) a tanh-sinh rule takes over.

    Raises:
        QuadratureFailure: if the radicand is non-positive strictly inside the
            interval, or neither rule converges
    """
    lo, hi = (lo, hi) if lo <= hi else (hi, lo)
    span = hi - lo
    if span == 0.0:
        return 0.0

    _check_interior(radicand, lo, hi)

    def integrand(theta):
        s, c = np.sin(theta), np.cos(theta)
        r = np.asarray(radicand(lo + span * s * s), dtype=float)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, 2.0 * span * s * c / np.sqrt(safe), 0.0)

    result = quad(
        lambda th: float(integrand(th)),
        0.0, 0.5 * np.pi,
        epsabs=0.0, epsrel=rtol, limit=QUAD_LIMIT, full_output=1,
    )
    if len(result) == 3:
        return float(result[0])

    logger.debug(f"QUADPACK on ({lo:.6g}, {hi:.6g}) reported: {result[3]}; retrying with tanh-sinh")
    res = tanhsinh(integrand, 0.0, 0.5 * np.pi, rtol=rtol)
    if not res.success:
        raise QuadratureFailure(
            f"turning-point integral on ({lo:.10g}, {hi:.10g}) did not converge "
            f"(status {int(res.status)})"
        )
    return float(res.integral)
