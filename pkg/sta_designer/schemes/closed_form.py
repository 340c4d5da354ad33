"""
Closed-form switching times of the bang-bang protocol in the linear limit (gN = 0).
"""

import math
from typing import Dict, Tuple

from ..errors import DomainError
from ..models import ConstantU, Model, PhysicalParams, Scheme, Segment, TrapProtocol
from .bang_bang import check_bound, plateau_constants, switching_width
from .base import BaseScheme


def bang_bang_linear_closed_form(gamma: float, delta: float) -> Tuple[float, float]:
    """
    Plateau durations of the linear bang-bang expansion:

        t1 = asinh(sqrt((g^2 - 1)(g^2 d - 1) / (2 g^2 (1 + d)))) / sqrt(d)
        t2 = asin(sqrt((g^2 - 1)(g^2 d + 1) / (2 (g^4 d - 1)))) / sqrt(d)

    For delta = 1 these reduce to t1 = ln(gamma) and t2 = pi/4.
    """
    if gamma < 1 or delta < 1:
        raise DomainError(f"closed form needs gamma >= 1 and delta >= 1, got gamma={gamma}, delta={delta}")
    if gamma == 1:
        return 0.0, 0.0

    g2 = gamma ** 2
    arg1 = (g2 - 1.0) * (g2 * delta - 1.0) / (2.0 * g2 * (1.0 + delta))
    arg2 = (g2 - 1.0) * (g2 * delta + 1.0) / (2.0 * (g2 ** 2 * delta - 1.0))
    if arg1 < 0:
        raise DomainError(f"asinh argument is complex (radicand {arg1:g})")
    if not 0.0 <= arg2 <= 1.0:
        raise DomainError(f"asin argument sqrt({arg2:g}) leaves [0, 1]")

    root_d = math.sqrt(delta)
    return math.asinh(math.sqrt(arg1)) / root_d, math.asin(math.sqrt(arg2)) / root_d


class BangBangClosedFormScheme(BaseScheme):
    """Bang-bang expansion on the ordinary width equation using the analytic plateau times."""

    @property
    def scheme_name(self) -> Scheme:
        return Scheme.BANG_BANG_CLOSED_FORM

    def prepare_params(self, params: PhysicalParams) -> PhysicalParams:
        return params.with_(model=Model.ORDINARY)

    def synthesize(
        self,
        params: PhysicalParams,
        a_i: float,
        a_f: float,
    ) -> Tuple[TrapProtocol, Dict[str, float]]:
        check_bound(params)
        t1, t2 = bang_bang_linear_closed_form(params.gamma, params.delta)
        if t1 + t2 == 0:
            return TrapProtocol([]), {'x1_B': a_i, 't1': 0.0, 't2': 0.0}

        c1, c2 = plateau_constants(params, a_i, a_f)
        protocol = TrapProtocol([
            Segment(t1, ConstantU(-params.delta)),
            Segment(t2, ConstantU(params.delta)),
        ])
        aux = {'x1_B': switching_width(params, a_i, a_f), 't1': t1, 't2': t2, 'c1': c1, 'c2': c2}
        return protocol, aux
