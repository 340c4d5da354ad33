"""
Base interface for STA protocol schemes.
"""

from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

from ..ermakov import integrate_ermakov, solve_boundary_widths, to_seconds
from ..models import (
    DesignReport,
    ErmakovState,
    ErmakovTrajectory,
    PhysicalParams,
    Scheme,
    TrapProtocol,
)
from ..utils import logger


class BaseScheme(ABC):
    """Abstract base class for protocol schemes."""

    @property
    @abstractmethod
    def scheme_name(self) -> Scheme:
        """Return the scheme this class designs."""
        pass

    @abstractmethod
    def synthesize(
        self,
        params: PhysicalParams,
        a_i: float,
        a_f: float,
    ) -> Tuple[TrapProtocol, Dict[str, float]]:
        """
        Build the control sequence connecting the stationary widths a_i and a_f.

        Args:
            params: problem definition
            a_i: initial stationary width
            a_f: final stationary width

        Returns:
            The protocol and the scheme-specific scalars to report
        """
        pass

    def trajectory(
        self,
        protocol: TrapProtocol,
        params: PhysicalParams,
        a_i: float,
        a_f: float,
    ) -> ErmakovTrajectory:
        """Width trajectory the protocol produces; forward integration unless overridden."""
        return integrate_ermakov(protocol, ErmakovState(a_i, 0.0), params)

    def prepare_params(self, params: PhysicalParams) -> PhysicalParams:
        """Hook for schemes tied to one dynamical model."""
        return params

    def is_extrapolated(self, params: PhysicalParams) -> bool:
        return False

    def design(self, params: PhysicalParams, omega0_hz: Optional[float] = None) -> DesignReport:
        """
        Convenience method to solve the boundary widths, synthesize and report in one call.
        """
        params = self.prepare_params(params)
        a_i, a_f = solve_boundary_widths(params)
        protocol, aux = self.synthesize(params, a_i, a_f)
        trajectory = self.trajectory(protocol, params, a_i, a_f)

        aux = {'a_i': a_i, 'a_f': a_f, **aux}
        extrapolated = self.is_extrapolated(params)
        if extrapolated:
            logger.warning(
                f"{self.scheme_name.value}: gamma={params.gamma:g} < 1 is a compression; "
                f"design is extrapolated"
            )

        t_f = protocol.t_f
        logger.debug(f"{self.scheme_name.value}: t_f={t_f:.10g}, aux={aux}")
        return DesignReport(
            scheme=self.scheme_name,
            params=params,
            protocol=protocol,
            t_f=t_f,
            boundary_residuals=boundary_residuals(trajectory, a_i, a_f),
            aux=aux,
            extrapolated=extrapolated,
            t_f_seconds=to_seconds(t_f, omega0_hz) if omega0_hz else None,
            trajectory=trajectory,
        )


def boundary_residuals(trajectory: ErmakovTrajectory, a_i: float, a_f: float) -> Dict[str, float]:
    """The six boundary-condition residuals at t=0 and t=t_f."""
    residuals = {
        'a_0': abs(trajectory.a[0] - a_i),
        'a_dot_0': abs(trajectory.a_dot[0]),
        'a_ddot_0': abs(trajectory.a_ddot[0]),
        'a_f': abs(trajectory.a[-1] - a_f),
        'a_dot_f': abs(trajectory.a_dot[-1]),
        'a_ddot_f': abs(trajectory.a_ddot[-1]),
    }
    return {k: float(v) for k, v in residuals.items()}
