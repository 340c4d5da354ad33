"""
Two-jump ("bang") protocol: jump to a constant intermediate trap, hold, jump to the final trap.

The intermediate frequency is chosen so that the effective potential takes the
same value at a_i and a_f; the width then coasts from rest at a_i to rest at a_f.
"""

from typing import Dict, Tuple

import numpy as np

from ..ermakov import width_potential
from ..errors import DomainError
from ..models import ConstantU, PhysicalParams, Scheme, Segment, TrapProtocol
from ..quadrature import singular_time_quadrature
from .base import BaseScheme


def intermediate_omega_squared(params: PhysicalParams, a_i: float, a_f: float) -> float:
    """
    omega_c^2 equalizing U(a_i) and U(a_f).

    Generalized: 1/(a_i^2 a_f^2) + sqrt(2/pi) gN / (a_i a_f (a_i + a_f)).
    """
    if a_i == a_f:
        return params.u_final
    w_i = width_potential(a_i, params.g_n, params.model)
    w_f = width_potential(a_f, params.g_n, params.model)
    return float((w_i - w_f) / (a_f ** 2 - a_i ** 2))


def two_jump_linear_width(t, gamma: float):
    """
    Exact width of the linear two-jump protocol (ordinary model, a_i=1):
    a(t) = sqrt(1 + (1 - w^2)/w^2 sin^2(w t)) with w = 1/gamma.
    """
    w = 1.0 / gamma
    return np.sqrt(1.0 + (1.0 - w ** 2) / w ** 2 * np.sin(w * np.asarray(t, dtype=float)) ** 2)


class TwoJumpScheme(BaseScheme):
    """Single constant plateau between two sudden jumps."""

    @property
    def scheme_name(self) -> Scheme:
        return Scheme.TWO_JUMP

    def is_extrapolated(self, params: PhysicalParams) -> bool:
        return not params.is_expansion

    def synthesize(
        self,
        params: PhysicalParams,
        a_i: float,
        a_f: float,
    ) -> Tuple[TrapProtocol, Dict[str, float]]:
        u_c = intermediate_omega_squared(params, a_i, a_f)
        if u_c <= 0:
            raise DomainError(f"intermediate trap is not confining (omega_c^2={u_c:g})")
        aux = {'omega_c': float(np.sqrt(u_c)), 'omega_c_sq': u_c}
        if a_i == a_f:
            return TrapProtocol([]), aux

        energy_i = u_c * a_i ** 2 + width_potential(a_i, params.g_n, params.model)

        def radicand(x):
            return energy_i - u_c * x ** 2 - width_potential(x, params.g_n, params.model)

        t_f = singular_time_quadrature(radicand, a_i, a_f)
        aux['c'] = float(energy_i)
        return TrapProtocol([Segment(t_f, ConstantU(u_c))]), aux


def design_two_jump(params: PhysicalParams, **kwargs):
    """Design the two-jump protocol for the given problem."""
    return TwoJumpScheme().design(params, **kwargs)
