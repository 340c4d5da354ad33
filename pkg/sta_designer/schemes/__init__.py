"""
STA protocol schemes.
"""

from typing import Optional

from ..config import DEFAULT_TF_INVERSE
from ..models import DesignReport, PhysicalParams, Scheme
from .bang_bang import BangBangScheme, BangBangTFScheme, design_bang_bang, design_bang_bang_tf
from .base import BaseScheme
from .closed_form import BangBangClosedFormScheme, bang_bang_linear_closed_form
from .inverse_engineering import InverseEngineeringScheme, design_inverse_engineering
from .two_jump import TwoJumpScheme, design_two_jump, two_jump_linear_width

__all__ = [
    'BaseScheme',
    'InverseEngineeringScheme',
    'TwoJumpScheme',
    'BangBangScheme',
    'BangBangTFScheme',
    'BangBangClosedFormScheme',
    'design',
    'get_scheme',
    'design_inverse_engineering',
    'design_two_jump',
    'design_bang_bang',
    'design_bang_bang_tf',
    'bang_bang_linear_closed_form',
    'two_jump_linear_width',
]


def get_scheme(scheme: Scheme, t_f: Optional[float] = None) -> BaseScheme:
    """Instantiate the scheme; t_f only applies to inverse engineering."""
    scheme = Scheme(scheme)
    if scheme is Scheme.INVERSE_ENGINEERING:
        return InverseEngineeringScheme(t_f if t_f is not None else DEFAULT_TF_INVERSE)
    if scheme is Scheme.TWO_JUMP:
        return TwoJumpScheme()
    if scheme is Scheme.BANG_BANG:
        return BangBangScheme()
    if scheme is Scheme.BANG_BANG_TF:
        return BangBangTFScheme()
    return BangBangClosedFormScheme()


def design(
    scheme: Scheme,
    params: PhysicalParams,
    t_f: Optional[float] = None,
    omega0_hz: Optional[float] = None,
) -> DesignReport:
    """Design a protocol with the named scheme."""
    return get_scheme(scheme, t_f).design(params, omega0_hz=omega0_hz)
