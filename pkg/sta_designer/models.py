"""
Canonical data models for trap protocols, width trajectories and design reports.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError
from .utils import is_strictly_increasing


class Model(str, Enum):
    """Dynamical model for the condensate width."""

    GENERALIZED = 'generalized'
    ORDINARY = 'ordinary'
    THOMAS_FERMI = 'thomas-fermi'


class Scheme(str, Enum):
    """Shortcut-to-adiabaticity protocol families."""

    INVERSE_ENGINEERING = 'inverse-engineering'
    TWO_JUMP = 'two-jump'
    BANG_BANG = 'bang-bang'
    BANG_BANG_TF = 'bang-bang-tf'
    BANG_BANG_CLOSED_FORM = 'bang-bang-closed-form'


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensionless problem definition in units where the initial trap frequency is 1."""

    g_n: float = 0.0
    gamma: float = 10.0
    delta: float = 1.0
    model: Model = Model.GENERALIZED

    def __post_init__(self):
        object.__setattr__(self, 'model', Model(self.model))
        for name in ('g_n', 'gamma', 'delta'):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    @property
    def u_initial(self) -> float:
        return 1.0

    @property
    def u_final(self) -> float:
        return 1.0 / self.gamma ** 4

    @property
    def interaction(self) -> float:
        """Coefficient gN/sqrt(2 pi) of the variational nonlinear term (zero off the generalized model)."""
        if self.model is Model.GENERALIZED:
            return self.g_n / math.sqrt(2.0 * math.pi)
        return 0.0

    @property
    def is_expansion(self) -> bool:
        return self.gamma >= 1.0

    def with_(self, **changes) -> 'PhysicalParams':
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            'g_n': self.g_n,
            'gamma': self.gamma,
            'delta': self.delta,
            'model': self.model.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'PhysicalParams':
        return cls(
            g_n=float(data['g_n']),
            gamma=float(data['gamma']),
            delta=float(data['delta']),
            model=Model(data.get('model', Model.GENERALIZED.value)),
        )


@dataclass(frozen=True)
class ErmakovState:
    """Phase-space point (x1, x2) = (a, da/dt)."""

    x1: float
    x2: float = 0.0

    def __post_init__(self):
        if not self.x1 > 0:
            raise DomainError(f"width must be positive, got {self.x1}")


@dataclass(frozen=True)
class ConstantU:
    """Constant squared trap frequency over a segment."""

    value: float

    def at(self, local_t):
        if np.ndim(local_t):
            return np.full(np.shape(local_t), self.value)
        return self.value

    @property
    def max_abs(self) -> float:
        return abs(self.value)


@dataclass(frozen=True, eq=False)
class SampledU:
    """Smooth squared trap frequency sampled on a local time grid starting at 0."""

    times: np.ndarray
    values: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.size < 2:
            raise DomainError("sampled control needs matching time/value arrays with at least 2 samples")
        if not is_strictly_increasing(times):
            raise DomainError("sample grid must be strictly increasing")
        if times[0] != 0.0:
            raise DomainError(f"sample grid must start at 0, got {times[0]}")
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, '_spline', CubicSpline(times, values))

    def at(self, local_t):
        out = self._spline(local_t)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def span(self) -> float:
        return float(self.times[-1])

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


Control = Union[ConstantU, SampledU]


@dataclass(frozen=True, eq=False)
class Segment:
    """One piece of a trap protocol; jumps only happen at segment edges."""

    duration: float
    control: Control

    def __post_init__(self):
        if not (self.duration > 0 and math.isfinite(self.duration)):
            raise DomainError(f"segment duration must be positive, got {self.duration}")
        if isinstance(self.control, SampledU):
            span = self.control.span
            if abs(span - self.duration) > 1e-9 * max(1.0, self.duration):
                raise DomainError(
                    f"sampled control spans {span} but segment lasts {self.duration}"
                )


@dataclass(eq=False)
class TrapProtocol:
    """The control u(t) = omega^2(t) as an ordered list of segments."""

    segments: List[Segment] = field(default_factory=list)

    @property
    def t_f(self) -> float:
        return float(sum(s.duration for s in self.segments))

    @property
    def boundaries(self) -> np.ndarray:
        """Segment edge times, starting with 0 and ending with t_f."""
        return np.concatenate([[0.0], np.cumsum([s.duration for s in self.segments])])

    @property
    def max_abs_u(self) -> float:
        if not self.segments:
            return 0.0
        return max(s.control.max_abs for s in self.segments)

    def to_dict(self) -> dict:
        out = []
        for seg in self.segments:
            if isinstance(seg.control, ConstantU):
                out.append({'kind': 'constant', 'duration': seg.duration, 'value': seg.control.value})
            else:
                out.append({
                    'kind': 'sampled',
                    'duration': seg.duration,
                    'times': seg.control.times.tolist(),
                    'values': seg.control.values.tolist(),
                })
        return {'segments': out}

    @classmethod
    def from_dict(cls, data: dict) -> 'TrapProtocol':
        segments = []
        for item in data.get('segments', []):
            if item['kind'] == 'constant':
                control = ConstantU(float(item['value']))
            else:
                control = SampledU(np.asarray(item['times']), np.asarray(item['values']))
            segments.append(Segment(float(item['duration']), control))
        return cls(segments)


@dataclass(eq=False)
class ErmakovTrajectory:
    """Width time series; segment edges appear twice (end of one, start of next)."""

    times: np.ndarray
    a: np.ndarray
    a_dot: np.ndarray
    a_ddot: np.ndarray
    u: np.ndarray
    segment_index: np.ndarray

    @property
    def b(self) -> np.ndarray:
        """Chirp b = -a_dot / (2a)."""
        return -self.a_dot / (2.0 * self.a)

    @property
    def t_f(self) -> float:
        return float(self.times[-1] - self.times[0])

    def segment(self, index: int) -> 'ErmakovTrajectory':
        mask = self.segment_index == index
        return ErmakovTrajectory(
            self.times[mask], self.a[mask], self.a_dot[mask],
            self.a_ddot[mask], self.u[mask], self.segment_index[mask],
        )

    @property
    def n_segments(self) -> int:
        return int(self.segment_index.max()) + 1 if self.segment_index.size else 0

    def to_dict(self) -> dict:
        return {
            't': self.times,
            'a': self.a,
            'a_dot': self.a_dot,
            'a_ddot': self.a_ddot,
            'b': self.b,
            'u': self.u,
            'segment': self.segment_index,
        }


RESIDUAL_KEYS = ('a_0', 'a_dot_0', 'a_ddot_0', 'a_f', 'a_dot_f', 'a_ddot_f')


@dataclass(eq=False)
class DesignReport:
    """A designed protocol together with its boundary diagnostics."""

    scheme: Scheme
    params: PhysicalParams
    protocol: TrapProtocol
    t_f: float
    boundary_residuals: Dict[str, float] = field(default_factory=dict)
    aux: Dict[str, float] = field(default_factory=dict)
    extrapolated: bool = False
    t_f_seconds: Optional[float] = None

    # Designed width trajectory (not serialized)
    trajectory: Optional[ErmakovTrajectory] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            'scheme': self.scheme.value,
            'params': self.params.to_dict(),
            't_f': self.t_f,
            't_f_seconds': self.t_f_seconds,
            'boundary_residuals': dict(self.boundary_residuals),
            'aux': dict(self.aux),
            'extrapolated': self.extrapolated,
            'protocol': self.protocol.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'DesignReport':
        return cls(
            scheme=Scheme(data['scheme']),
            params=PhysicalParams.from_dict(data['params']),
            protocol=TrapProtocol.from_dict(data['protocol']),
            t_f=float(data['t_f']),
            boundary_residuals={k: float(v) for k, v in data.get('boundary_residuals', {}).items()},
            aux={k: float(v) for k, v in data.get('aux', {}).items()},
            extrapolated=bool(data.get('extrapolated', False)),
            t_f_seconds=data.get('t_f_seconds'),
        )


@dataclass
class VerificationSummary:
    """Outcome of forward-integrating a designed protocol."""

    passed: bool
    a_final: float
    a_target: float
    endpoint_residual_a: float
    endpoint_residual_a_dot: float
    first_integral_drift: List[float] = field(default_factory=list)
    tolerance: float = 1e-5

    def to_dict(self) -> dict:
        return {
            'status': 'PASS' if self.passed else 'FAIL',
            'a_final': self.a_final,
            'a_target': self.a_target,
            'endpoint_residual_a': self.endpoint_residual_a,
            'endpoint_residual_a_dot': self.endpoint_residual_a_dot,
            'first_integral_drift': list(self.first_integral_drift),
            'tolerance': self.tolerance,
        }


class ScanStatus(str, Enum):
    OK = 'OK'
    COLLAPSE = 'Collapse'
    QUADRATURE_FAILURE = 'QuadratureFailure'
    NUMERICAL_FAILURE = 'NumericalFailure'


@dataclass
class ScanRow:
    """One grid point of a parameter scan; failures are rows too."""

    g_n: float
    gamma: float
    delta: float
    scheme: Optional[str] = None
    model: Optional[str] = None
    t_f: Optional[float] = None
    energy: Optional[float] = None
    fidelity: Optional[float] = None
    status: ScanStatus = ScanStatus.OK
    message: str = ""
    extra: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status is ScanStatus.OK

    def to_dict(self) -> dict:
        row = {
            'scheme': self.scheme,
            'model': self.model,
            'g_n': self.g_n,
            'gamma': self.gamma,
            'delta': self.delta,
            't_f': self.t_f,
            'energy': self.energy,
            'fidelity': self.fidelity,
        }
        row.update(self.extra)
        row['status'] = self.status.value
        row['message'] = self.message
        return row
