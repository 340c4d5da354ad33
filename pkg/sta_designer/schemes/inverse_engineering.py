"""
Inverse engineering: prescribe a polynomial width a(t) and solve for u(t).
"""

from typing import Dict, Tuple

import numpy as np

from ..config import DEFAULT_TF_INVERSE, INVERSE_SAMPLES
from ..ermakov import omega_squared_from_width
from ..errors import DomainError
from ..models import (
    ErmakovTrajectory,
    PhysicalParams,
    SampledU,
    Scheme,
    Segment,
    TrapProtocol,
)
from .base import BaseScheme


def polynomial_width(t, t_f: float, a_i: float, a_f: float):
    """
    Quintic ansatz a = a_i - 6 D s^5 + 15 D s^4 - 10 D s^3, D = a_i - a_f, s = t/t_f,
    and its first two time derivatives. Velocity and acceleration vanish at both ends.
    """
    s = np.asarray(t, dtype=float) / t_f
    d = a_i - a_f
    a = a_i - 6.0 * d * s ** 5 + 15.0 * d * s ** 4 - 10.0 * d * s ** 3
    a_dot = d * (-30.0 * s ** 4 + 60.0 * s ** 3 - 30.0 * s ** 2) / t_f
    a_ddot = d * (-120.0 * s ** 3 + 180.0 * s ** 2 - 60.0 * s) / t_f ** 2
    return a, a_dot, a_ddot


class InverseEngineeringScheme(BaseScheme):
    """Smooth protocol of prescribed duration; may pass through expulsive traps."""

    def __init__(self, t_f: float = DEFAULT_TF_INVERSE, n_samples: int = INVERSE_SAMPLES):
        if not t_f > 0:
            raise DomainError(f"inverse-engineering t_f must be positive, got {t_f}")
        self.t_f = float(t_f)
        self.n_samples = max(int(n_samples), 1001)

    @property
    def scheme_name(self) -> Scheme:
        return Scheme.INVERSE_ENGINEERING

    def _samples(self):
        return np.linspace(0.0, self.t_f, self.n_samples)

    def synthesize(
        self,
        params: PhysicalParams,
        a_i: float,
        a_f: float,
    ) -> Tuple[TrapProtocol, Dict[str, float]]:
        t = self._samples()
        a, _, a_ddot = polynomial_width(t, self.t_f, a_i, a_f)
        u = omega_squared_from_width(a, a_ddot, params)
        protocol = TrapProtocol([Segment(self.t_f, SampledU(t, u))])
        return protocol, {'u_min': float(u.min()), 'u_max': float(u.max())}

    def trajectory(
        self,
        protocol: TrapProtocol,
        params: PhysicalParams,
        a_i: float,
        a_f: float,
    ) -> ErmakovTrajectory:
        # Analytic: the ansatz is the trajectory by construction
        t = self._samples()
        a, a_dot, a_ddot = polynomial_width(t, self.t_f, a_i, a_f)
        return ErmakovTrajectory(
            times=t,
            a=a,
            a_dot=a_dot,
            a_ddot=a_ddot,
            u=protocol.segments[0].control.values,
            segment_index=np.zeros(t.size, dtype=int),
        )


def design_inverse_engineering(params: PhysicalParams, t_f: float = DEFAULT_TF_INVERSE, **kwargs):
    """Design the polynomial inverse-engineering protocol of duration t_f."""
    return InverseEngineeringScheme(t_f).design(params, **kwargs)
