"""
Generalized, ordinary and Thomas-Fermi Ermakov equations for the condensate width.

All quantities are dimensionless with the initial trap frequency set to 1. The
generalized equation reads

    a'' + u(t) a = 1/a^3 + gN / (sqrt(2 pi) a^2),      u = omega^2

the ordinary one drops the gN term and the Thomas-Fermi one is a'' + u a = 1/a^2.
"""

import math
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .config import (
    COLLAPSE_FLOOR,
    DEFAULT_ATOL,
    DEFAULT_RTOL,
    ODE_METHOD,
    ROOT_MAX_EXPANSIONS,
    ROOT_RESIDUAL_TOL,
    TRAJECTORY_POINTS_PER_SEGMENT,
)
from .errors import CollapseError, DomainError, NoPositiveRoot, StepFailure
from .models import (
    ConstantU,
    ErmakovState,
    ErmakovTrajectory,
    Model,
    PhysicalParams,
    TrapProtocol,
)
from .utils import logger

SQRT_2PI = math.sqrt(2.0 * math.pi)


def _check_width(a) -> None:
    if np.any(np.asarray(a) <= 0):
        raise DomainError(f"width must be positive, got {a}")


def _interaction(g_n: float, model: Model) -> float:
    return g_n / SQRT_2PI if model is Model.GENERALIZED else 0.0


# ---------------------------------------------------------------------------
# Boundary widths
# ---------------------------------------------------------------------------

def stationary_width(u: float, g_n: float) -> float:
    """
    Positive root of u a^4 - (gN/sqrt(2 pi)) a = 1, the stationary width of the
    generalized equation in a trap with squared frequency u > 0.

    Bracketed Brent iteration followed by Newton polishing.

    Raises:
        NoPositiveRoot: if the root lies below the collapse floor
    """
    if u <= 0:
        raise DomainError(f"stationary width needs a confining trap, got u={u}")
    k = g_n / SQRT_2PI

    def f(a):
        return u * a ** 4 - k * a - 1.0

    lo = COLLAPSE_FLOOR
    hi = u ** -0.25 * (1.0 + abs(g_n) + 1.0)
    if f(lo) >= 0:
        raise NoPositiveRoot(
            f"no positive width above the collapse floor for gN={g_n}, u={u} "
            f"(searched [{lo:g}, {hi:g}])",
            bracket=(lo, hi),
        )

    expansions = 0
    while f(hi) <= 0:
        if expansions >= ROOT_MAX_EXPANSIONS:
            raise NoPositiveRoot(
                f"could not bracket the stationary width for gN={g_n}, u={u} "
                f"(searched [{lo:g}, {hi:g}])",
                bracket=(lo, hi),
            )
        hi *= 2.0
        expansions += 1

    root = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)

    # Newton polish
    for _ in range(3):
        slope = 4.0 * u * root ** 3 - k
        if slope == 0:
            break
        root -= f(root) / slope

    if abs(f(root)) > ROOT_RESIDUAL_TOL:
        logger.warning(f"Stationary width residual {abs(f(root)):.3e} exceeds {ROOT_RESIDUAL_TOL:g}")
    return float(root)


def solve_boundary_widths(params: PhysicalParams) -> Tuple[float, float]:
    """
    Stationary widths (a_i, a_f) of the initial trap u=1 and the final trap u=1/gamma^4.

    The ordinary model has a_i=1, a_f=gamma; the Thomas-Fermi model a_i=1, a_f=gamma^(4/3).
    """
    if params.model is Model.ORDINARY:
        return 1.0, float(params.gamma)
    if params.model is Model.THOMAS_FERMI:
        return 1.0, float(params.gamma ** (4.0 / 3.0))
    a_i = stationary_width(params.u_initial, params.g_n)
    a_f = stationary_width(params.u_final, params.g_n)
    return a_i, a_f


# ---------------------------------------------------------------------------
# Effective potential, energy and the constant-u first integral
# ---------------------------------------------------------------------------

def width_potential(a, g_n: float, model: Model = Model.GENERALIZED):
    """The u-independent part W(a) of the first integral a'^2 + u a^2 + W(a) = c."""
    _check_width(a)
    a = np.asarray(a, dtype=float) if np.ndim(a) else a
    if model is Model.THOMAS_FERMI:
        return 2.0 / a
    return 1.0 / a ** 2 + 2.0 * _interaction(g_n, model) / a


def effective_potential(a, u, g_n: float, model: Model = Model.GENERALIZED):
    """U(a) = u a^2/2 + 1/(2a^2) + gN/(sqrt(2 pi) a) (model-appropriate)."""
    return 0.5 * u * a ** 2 + 0.5 * width_potential(a, g_n, model)


def effective_energy(state: ErmakovState, u: float, g_n: float, model: Model = Model.GENERALIZED) -> float:
    """E = a'^2/2 + U(a)."""
    return 0.5 * state.x2 ** 2 + float(effective_potential(state.x1, u, g_n, model))


def first_integral(a, a_dot, u, params: PhysicalParams):
    """x2^2 + u x1^2 + W(x1); constant along any constant-u arc and equal to 2E."""
    return a_dot ** 2 + u * a ** 2 + width_potential(a, params.g_n, params.model)


# ---------------------------------------------------------------------------
# Equation of motion
# ---------------------------------------------------------------------------

def width_acceleration(a, u, params: PhysicalParams):
    """Right-hand side a'' = -u a + restoring terms, vectorized over a and u."""
    if params.model is Model.THOMAS_FERMI:
        return -u * a + 1.0 / a ** 2
    return -u * a + 1.0 / a ** 3 + params.interaction / a ** 2


def ermakov_rhs(state: ErmakovState, u: float, params: PhysicalParams) -> Tuple[float, float]:
    """
    State derivative (a', a'') for the selected model.

    Raises:
        CollapseError: if the width is below the collapse floor
    """
    if state.x1 < COLLAPSE_FLOOR:
        raise CollapseError(f"width {state.x1:g} below collapse floor", width=state.x1)
    return state.x2, float(width_acceleration(state.x1, u, params))


def omega_squared_from_width(a, a_ddot, params: PhysicalParams):
    """Invert the equation of motion: u = (-a'' + restoring terms) / a."""
    _check_width(a)
    return width_acceleration(a, 0.0, params) / a - a_ddot / a


def collapse_event(t, y):
    return y[0] - COLLAPSE_FLOOR


collapse_event.terminal = True
collapse_event.direction = -1


def _control_function(control) -> Callable[[float], float]:
    if isinstance(control, ConstantU):
        value = control.value
        return lambda t: value
    return control.at


def integrate_ermakov(
    protocol: TrapProtocol,
    initial: ErmakovState,
    params: PhysicalParams,
    tol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    points_per_segment: int = TRAJECTORY_POINTS_PER_SEGMENT,
) -> ErmakovTrajectory:
    """
    Integrate the width equation segment by segment.

    The state (a, a') is carried continuously across segment edges while a''
    jumps with u. Each segment is integrated on its own so the adaptive
    controller never steps across a discontinuity; the output grid holds every
    edge twice (end of one segment, start of the next).

    Args:
        protocol: piecewise control u(t)
        initial: state at t=0
        params: problem definition (selects the model)
        tol: relative tolerance of the embedded Runge-Kutta pair
        atol: absolute tolerance
        points_per_segment: dense-output samples per segment

    Returns:
        ErmakovTrajectory on a grid that includes all segment boundaries

    Raises:
        CollapseError: if the width drops below the collapse floor
        StepFailure: if the step-size controller stalls
    """
    if initial.x1 < COLLAPSE_FLOOR:
        raise CollapseError(f"initial width {initial.x1:g} below collapse floor", time=0.0, width=initial.x1)

    if not protocol.segments:
        u0 = params.u_initial
        return ErmakovTrajectory(
            times=np.array([0.0]),
            a=np.array([initial.x1]),
            a_dot=np.array([initial.x2]),
            a_ddot=np.array([float(width_acceleration(initial.x1, u0, params))]),
            u=np.array([u0]),
            segment_index=np.array([0]),
        )

    times, widths, velocities, controls, indices = [], [], [], [], []
    y = np.array([initial.x1, initial.x2], dtype=float)
    t0 = 0.0

    for idx, segment in enumerate(protocol.segments):
        u_of_t = _control_function(segment.control)

        def rhs(t, state, u_of_t=u_of_t):
            return [state[1], width_acceleration(state[0], u_of_t(t), params)]

        sol = solve_ivp(
            rhs,
            (0.0, segment.duration),
            y,
            method=ODE_METHOD,
            rtol=tol,
            atol=atol,
            dense_output=True,
            events=collapse_event,
        )

        if sol.status == 1:
            t_hit = t0 + float(sol.t_events[0][0])
            raise CollapseError(
                f"width collapsed below {COLLAPSE_FLOOR:g} at t={t_hit:.6g} (segment {idx})",
                time=t_hit,
                width=float(sol.y_events[0][0][0]),
            )
        if sol.status != 0:
            raise StepFailure(f"integration failed in segment {idx}: {sol.message}")

        local = np.linspace(0.0, segment.duration, max(int(points_per_segment), 2))
        samples = sol.sol(local)
        samples[:, 0] = y
        samples[:, -1] = sol.y[:, -1]

        times.append(t0 + local)
        widths.append(samples[0])
        velocities.append(samples[1])
        controls.append(np.asarray(segment.control.at(local), dtype=float))
        indices.append(np.full(local.size, idx))

        logger.debug(
            f"Segment {idx}: duration={segment.duration:.6g}, nfev={sol.nfev}, "
            f"a_end={sol.y[0, -1]:.10g}"
        )

        y = sol.y[:, -1].copy()
        t0 += segment.duration

    a = np.concatenate(widths)
    u = np.concatenate(controls)
    return ErmakovTrajectory(
        times=np.concatenate(times),
        a=a,
        a_dot=np.concatenate(velocities),
        a_ddot=width_acceleration(a, u, params),
        u=u,
        segment_index=np.concatenate(indices),
    )


# ---------------------------------------------------------------------------
# Small helpers
# ---------------------------------------------------------------------------

def gaussian_amplitude(a):
    """Amplitude (pi a^2)^(-1/4) fixed by normalization."""
    _check_width(a)
    return (np.pi * np.asarray(a) ** 2) ** -0.25


def chirp(a, a_dot):
    """b = -a'/(2a)."""
    _check_width(a)
    return -np.asarray(a_dot) / (2.0 * np.asarray(a))


def to_seconds(t: float, omega0_hz: float) -> float:
    """Convert a dimensionless time to seconds, given omega_0 / 2pi in Hz."""
    if omega0_hz <= 0:
        raise DomainError(f"omega0_hz must be positive, got {omega0_hz}")
    return t / (2.0 * math.pi * omega0_hz)
