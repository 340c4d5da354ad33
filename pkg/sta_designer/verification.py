"""
Post-hoc checks of designed protocols by forward integration.
"""

from typing import List, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .config import DEFAULT_RTOL, ODE_METHOD, VERIFY_TOL
from .ermakov import (
    collapse_event,
    first_integral,
    integrate_ermakov,
    solve_boundary_widths,
    width_acceleration,
    width_potential,
)
from .errors import CollapseError, DomainError, StepFailure
from .models import (
    ConstantU,
    DesignReport,
    ErmakovState,
    ErmakovTrajectory,
    PhysicalParams,
    TrapProtocol,
    VerificationSummary,
)
from .utils import logger


def first_integral_drift(
    trajectory: ErmakovTrajectory,
    protocol: TrapProtocol,
    params: PhysicalParams,
) -> List[Optional[float]]:
    """
    Spread of a'^2 + u a^2 + W(a) on each constant segment, relative to the
    size of its terms.

    Segments with a time-dependent control have no first integral and report None.
    """
    drift: List[Optional[float]] = []
    for idx, segment in enumerate(protocol.segments):
        if not isinstance(segment.control, ConstantU):
            drift.append(None)
            continue
        part = trajectory.segment(idx)
        u = segment.control.value
        values = first_integral(part.a, part.a_dot, u, params)
        # On expulsive plateaus the sum cancels towards zero while its terms grow
        terms = part.a_dot ** 2 + abs(u) * part.a ** 2 + np.abs(width_potential(part.a, params.g_n, params.model))
        scale = max(1.0, float(np.max(terms)))
        drift.append(float(np.max(np.abs(values - values[0])) / scale))
    return drift


def verify_protocol(
    report: DesignReport,
    params: Optional[PhysicalParams] = None,
    tol: float = VERIFY_TOL,
    rtol: float = DEFAULT_RTOL,
) -> VerificationSummary:
    """
    Integrate the report's protocol from (a_i, 0) and compare the endpoint with (a_f, 0).

    Args:
        report: designed protocol
        params: problem to check against (defaults to the report's own)
        tol: pass threshold on |a(t_f) - a_f| and |a'(t_f)|
        rtol: integrator tolerance

    Returns:
        VerificationSummary; passed iff both endpoint residuals are below tol
    """
    params = params or report.params
    a_i, a_f = solve_boundary_widths(params)
    trajectory = integrate_ermakov(report.protocol, ErmakovState(a_i, 0.0), params, tol=rtol)

    residual_a = abs(float(trajectory.a[-1]) - a_f)
    residual_a_dot = abs(float(trajectory.a_dot[-1]))
    passed = residual_a < tol and residual_a_dot < tol

    summary = VerificationSummary(
        passed=passed,
        a_final=float(trajectory.a[-1]),
        a_target=a_f,
        endpoint_residual_a=residual_a,
        endpoint_residual_a_dot=residual_a_dot,
        first_integral_drift=first_integral_drift(trajectory, report.protocol, params),
        tolerance=tol,
    )
    logger.info(
        f"Verification {'PASS' if passed else 'FAIL'}: |a(t_f)-a_f|={residual_a:.3e}, "
        f"|a'(t_f)|={residual_a_dot:.3e}"
    )
    return summary


def _run_until(event, y0, u: float, params: PhysicalParams, horizon: float):
    def rhs(t, y):
        return [y[1], width_acceleration(y[0], u, params)]

    sol = solve_ivp(
        rhs, (0.0, horizon), y0,
        method=ODE_METHOD, rtol=1e-12, atol=1e-12,
        events=[event, collapse_event],
    )
    if sol.status == -1:
        raise StepFailure(f"shooting integration failed: {sol.message}")
    if sol.t_events[1].size:
        raise CollapseError("width collapsed while shooting", time=float(sol.t_events[1][0]))
    if not sol.t_events[0].size:
        raise DomainError(f"shooting target not reached within t={horizon:g}")
    return float(sol.t_events[0][0]), sol.y_events[0][0]


def shooting_time(report: DesignReport, params: Optional[PhysicalParams] = None) -> float:
    """
    Independent duration of a constant-plateau design by ODE shooting.

    Starting from rest at a_i, each plateau except the last runs until the width
    reaches the next switching width; the last runs until a' returns to zero.
    """
    params = params or report.params
    segments = report.protocol.segments
    if not all(isinstance(s.control, ConstantU) for s in segments):
        raise DomainError("shooting needs a protocol made of constant plateaus")
    if not segments:
        return 0.0

    a_i, a_f = solve_boundary_widths(params)
    outward = a_f > a_i
    horizon = 4.0 * report.t_f + 10.0
    y = np.array([a_i, 0.0])
    total = 0.0

    for idx, segment in enumerate(segments):
        if idx == len(segments) - 1:
            def event(t, state):
                return state[1]
            event.direction = -1 if outward else 1
        else:
            target = report.aux['x1_B']

            def event(t, state, target=target):
                return state[0] - target
            event.direction = 1 if outward else -1
        event.terminal = True

        t_hit, y = _run_until(event, y, segment.control.value, params, horizon)
        total += t_hit

    logger.debug(f"Shooting time {total:.12g} vs designed {report.t_f:.12g}")
    return total
