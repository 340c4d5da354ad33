"""
Three-jump bang-bang protocol at the frequency bound.

For an expansion the control jumps 1 -> -delta (expulsive), switches to +delta
at the width x1_B, and finally jumps to 1/gamma^4. On each plateau the first
integral a'^2 + u a^2 + W(a) = c fixes the velocity, so both plateau durations
are turning-point integrals. Compressions swap the two plateau values.
"""

import math
from typing import Dict, Tuple

from ..ermakov import width_potential
from ..errors import DomainError, InvalidSwitch
from ..models import ConstantU, Model, PhysicalParams, Scheme, Segment, TrapProtocol
from ..quadrature import singular_time_quadrature
from .base import BaseScheme


def plateau_values(params: PhysicalParams) -> Tuple[float, float]:
    """(u1, u2): (-delta, +delta) for an expansion, swapped for a compression."""
    if params.is_expansion:
        return -params.delta, params.delta
    return params.delta, -params.delta


def check_bound(params: PhysicalParams) -> None:
    """The edge values u=1 and u=1/gamma^4 must respect |u| <= delta."""
    needed = max(params.u_initial, params.u_final)
    if params.delta < needed:
        raise DomainError(
            f"delta={params.delta:g} is below the edge trap values (needs delta >= {needed:g})"
        )


def plateau_constants(params: PhysicalParams, a_i: float, a_f: float) -> Tuple[float, float]:
    """First-integral constants c1 (arc leaving a_i at rest) and c2 (arc arriving at a_f at rest)."""
    u1, u2 = plateau_values(params)
    c1 = u1 * a_i ** 2 + width_potential(a_i, params.g_n, params.model)
    c2 = u2 * a_f ** 2 + width_potential(a_f, params.g_n, params.model)
    return float(c1), float(c2)


def switching_width(params: PhysicalParams, a_i: float, a_f: float) -> float:
    """
    Width x1_B at which the control flips, from continuity of the velocity.

    For the generalized expansion this is
    sqrt((a_f^2 + a_i^2)/2 + (a_i^2 - a_f^2)/(2 delta a_f^2 a_i^2) + gN (a_i - a_f)/(sqrt(2 pi) delta a_i a_f)).

    Raises:
        InvalidSwitch: if the squared width is negative or x1_B is not between a_i and a_f
    """
    u1, u2 = plateau_values(params)
    c1, c2 = plateau_constants(params, a_i, a_f)
    x_sq = (c1 - c2) / (u1 - u2)
    if not x_sq > 0:
        raise InvalidSwitch(f"switching width is complex (x1_B^2={x_sq:g})")
    x_b = math.sqrt(x_sq)
    lo, hi = min(a_i, a_f), max(a_i, a_f)
    if not lo < x_b < hi:
        raise InvalidSwitch(f"switching width {x_b:.10g} outside ({lo:.10g}, {hi:.10g})")
    return x_b


class BangBangScheme(BaseScheme):
    """Time-optimal bounded control with one intermediate switch."""

    @property
    def scheme_name(self) -> Scheme:
        return Scheme.BANG_BANG

    def is_extrapolated(self, params: PhysicalParams) -> bool:
        return not params.is_expansion

    def plateau_times(self, params: PhysicalParams, a_i: float, a_f: float, x_b: float) -> Tuple[float, float]:
        u1, u2 = plateau_values(params)
        c1, c2 = plateau_constants(params, a_i, a_f)

        def first(x):
            return c1 - u1 * x ** 2 - width_potential(x, params.g_n, params.model)

        def second(x):
            return c2 - u2 * x ** 2 - width_potential(x, params.g_n, params.model)

        return singular_time_quadrature(first, a_i, x_b), singular_time_quadrature(second, x_b, a_f)

    def synthesize(
        self,
        params: PhysicalParams,
        a_i: float,
        a_f: float,
    ) -> Tuple[TrapProtocol, Dict[str, float]]:
        check_bound(params)
        if a_i == a_f:
            return TrapProtocol([]), {'x1_B': a_i, 't1': 0.0, 't2': 0.0}

        u1, u2 = plateau_values(params)
        c1, c2 = plateau_constants(params, a_i, a_f)
        x_b = switching_width(params, a_i, a_f)
        t1, t2 = self.plateau_times(params, a_i, a_f, x_b)

        protocol = TrapProtocol([Segment(t1, ConstantU(u1)), Segment(t2, ConstantU(u2))])
        return protocol, {'x1_B': x_b, 't1': t1, 't2': t2, 'c1': c1, 'c2': c2}


class BangBangTFScheme(BangBangScheme):
    """Bang-bang control for the Thomas-Fermi width equation (a_f = gamma^(4/3))."""

    @property
    def scheme_name(self) -> Scheme:
        return Scheme.BANG_BANG_TF

    def prepare_params(self, params: PhysicalParams) -> PhysicalParams:
        return params.with_(model=Model.THOMAS_FERMI)


def design_bang_bang(params: PhysicalParams, **kwargs):
    """Design the bang-bang protocol for the given problem."""
    return BangBangScheme().design(params, **kwargs)


def design_bang_bang_tf(gamma: float, delta: float, **kwargs):
    """Design the Thomas-Fermi bang-bang protocol."""
    params = PhysicalParams(g_n=0.0, gamma=gamma, delta=delta, model=Model.THOMAS_FERMI)
    return BangBangTFScheme().design(params, **kwargs)
