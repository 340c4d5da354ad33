"""
Split-step Fourier solver for the dimensionless 1D Gross-Pitaevskii equation

    i psi_t = -psi_xx / 2 + u(t) x^2 psi / 2 + gN |psi|^2 psi

with real-time evolution under a TrapProtocol and imaginary-time ground states.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from .config import (
    ALIASING_FACTOR,
    DEFAULT_DT_IMAG,
    DEFAULT_RECORD_STRIDE,
    DT_SAFETY,
    GROUND_STATE_TOL,
    IMAG_RETRY_ATTEMPTS,
    MAX_IMAG_STEPS,
    MIN_GRID_POINTS,
    MIN_IMAG_STEPS,
    NORM_DRIFT_TOL,
)
from .ermakov import gaussian_amplitude, stationary_width
from .errors import DomainError, GridMismatch, NonConvergence, NoGroundState, NoPositiveRoot, NormDrift
from .models import TrapProtocol
from .utils import logger

OBSERVABLE_COLUMNS = ['t', 'norm', 'width', 'energy']


@dataclass(frozen=True)
class Grid:
    """Periodic box [-L, L) with n_points samples."""

    half_width: float
    n_points: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError(f"half width must be positive, got {self.half_width}")
        n = int(self.n_points)
        if n < MIN_GRID_POINTS or n & (n - 1):
            raise DomainError(f"n_points must be a power of two >= {MIN_GRID_POINTS}, got {n}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def dk(self) -> float:
        return math.pi / self.half_width

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def check_hosts(self, *widths: float) -> None:
        """Aliasing guard: the box must be ALIASING_FACTOR times wider than any cloud."""
        needed = ALIASING_FACTOR * max(widths)
        if self.half_width < needed:
            raise DomainError(
                f"grid half width {self.half_width:g} too small for width {max(widths):g} "
                f"(needs >= {needed:g})"
            )


@dataclass(eq=False)
class WaveField:
    """Complex wavefunction samples on a grid at time `time`."""

    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n_points,):
            raise GridMismatch(f"expected {self.grid.n_points} samples, got {self.values.shape}")

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        return float(np.sum(self.density) * self.grid.dx)

    def normalized(self) -> 'WaveField':
        return WaveField(self.grid, self.values / math.sqrt(self.norm()), self.time)

    def copy(self) -> 'WaveField':
        return WaveField(self.grid, self.values.copy(), self.time)


def _same_grid(a: WaveField, b: WaveField) -> None:
    if a.grid != b.grid:
        raise GridMismatch(f"fields live on different grids: {a.grid} vs {b.grid}")


def gaussian_field(grid: Grid, a: float, b: float = 0.0, x0: float = 0.0) -> WaveField:
    """Gaussian ansatz A exp(-(x-x0)^2/(2a^2) + i b (x-x0)^2), A = (pi a^2)^(-1/4)."""
    y = grid.x - x0
    values = gaussian_amplitude(a) * np.exp(-y ** 2 / (2.0 * a ** 2) + 1j * b * y ** 2)
    return WaveField(grid, values)


def fidelity(a_field: WaveField, b_field: WaveField) -> float:
    """Squared overlap |<a|b>|^2 (periodic trapezoid rule)."""
    _same_grid(a_field, b_field)
    overlap = np.sum(np.conj(a_field.values) * b_field.values) * a_field.grid.dx
    return float(abs(overlap) ** 2)


def width_of(field: WaveField, tol: float = 1e-6) -> float:
    """Gaussian-equivalent width sqrt(2 <x^2>)."""
    norm = field.norm()
    if abs(norm - 1.0) > tol:
        raise DomainError(f"width_of needs a normalized field, norm={norm:.12g}")
    x = field.grid.x
    second_moment = np.sum(x ** 2 * field.density) * field.grid.dx / norm
    return math.sqrt(2.0 * second_moment)


def gpe_energy(field: WaveField, u: float, g_n: float) -> float:
    """Energy functional: kinetic (spectral) + trap + gN |psi|^4 / 2."""
    grid = field.grid
    psi_k = np.fft.fft(field.values)
    kinetic = 0.5 * np.sum(grid.k ** 2 * np.abs(psi_k) ** 2) * grid.dx / grid.n_points
    density = field.density
    trap = 0.5 * u * np.sum(grid.x ** 2 * density) * grid.dx
    interaction = 0.5 * g_n * np.sum(density ** 2) * grid.dx
    return float(kinetic + trap + interaction)


# ---------------------------------------------------------------------------
# Imaginary time
# ---------------------------------------------------------------------------

class ImaginaryTimeRelaxation:
    """
    Normalized imaginary-time split-step descent towards the ground state of a
    static trap. The field persists across attempts, so a retry continues the
    descent with a doubled step budget.
    """

    def __init__(
        self,
        u: float,
        g_n: float,
        grid: Grid,
        dt_imag: float = DEFAULT_DT_IMAG,
        tol: float = GROUND_STATE_TOL,
        max_steps: int = MAX_IMAG_STEPS,
        initial: Optional[WaveField] = None,
    ):
        if u <= 0:
            raise NoGroundState(f"trap with u={u:g} has no normalizable ground state")
        self.u = u
        self.g_n = g_n
        self.grid = grid
        self.tol = tol
        self.max_steps = int(max_steps)
        # Hold dt*omega fixed for weak traps
        self.d_tau = dt_imag / math.sqrt(u) if u < 1.0 else dt_imag
        self.field = initial.normalized() if initial is not None else self._initial_guess()
        self.steps_taken = 0

    def _initial_guess(self) -> WaveField:
        try:
            a0 = stationary_width(self.u, self.g_n)
        except NoPositiveRoot:
            a0 = self.u ** -0.25
        self.grid.check_hosts(a0)
        return gaussian_field(self.grid, a0)

    def relax(self) -> WaveField:
        """
        One attempt of at most max_steps steps.

        Raises:
            NonConvergence: if the relative energy change never drops below tol
        """
        grid = self.grid
        kinetic = np.exp(-0.25 * grid.k ** 2 * self.d_tau)
        trap = 0.5 * self.u * grid.x ** 2
        psi = self.field.values.copy()
        energy = gpe_energy(self.field, self.u, self.g_n)

        for step in range(1, self.max_steps + 1):
            psi = np.fft.ifft(kinetic * np.fft.fft(psi))
            psi *= np.exp(-(trap + self.g_n * np.abs(psi) ** 2) * self.d_tau)
            psi = np.fft.ifft(kinetic * np.fft.fft(psi))
            psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)

            current = WaveField(grid, psi)
            new_energy = gpe_energy(current, self.u, self.g_n)
            change = abs(new_energy - energy) / max(abs(new_energy), 1e-300)
            energy = new_energy
            self.steps_taken += 1
            if step >= MIN_IMAG_STEPS and change < self.tol:
                logger.debug(
                    f"Ground state u={self.u:g}, gN={self.g_n:g}: converged after "
                    f"{self.steps_taken} steps, E={energy:.12g}"
                )
                return _fix_phase(current)

        self.field = WaveField(grid, psi)
        raise NonConvergence(
            f"imaginary time did not converge in {self.max_steps} steps "
            f"(u={self.u:g}, gN={self.g_n:g}, last relative change {change:.3e})"
        )

    @retry(
        stop=stop_after_attempt(IMAG_RETRY_ATTEMPTS),
        retry=retry_if_exception_type(NonConvergence),
        before_sleep=lambda state: state.args[0]._double_budget(),
        reraise=True,
    )
    def relax_with_retries(self) -> WaveField:
        return self.relax()

    def _double_budget(self) -> None:
        self.max_steps *= 2
        logger.warning(f"Imaginary time not converged; retrying with {self.max_steps} steps")


def _fix_phase(field: WaveField) -> WaveField:
    peak = field.values[np.argmax(np.abs(field.values))]
    return WaveField(field.grid, field.values * np.exp(-1j * np.angle(peak)), field.time)


def ground_state_imaginary_time(
    u: float,
    g_n: float,
    grid: Grid,
    dt_imag: float = DEFAULT_DT_IMAG,
    tol: float = GROUND_STATE_TOL,
    max_steps: int = MAX_IMAG_STEPS,
) -> WaveField:
    """
    Ground state of the static trap u by imaginary-time descent (single attempt).

    Raises:
        NoGroundState: if u <= 0
        NonConvergence: if the step budget runs out
    """
    return ImaginaryTimeRelaxation(u, g_n, grid, dt_imag, tol, max_steps).relax()


def find_ground_state(
    u: float,
    g_n: float,
    grid: Grid,
    dt_imag: float = DEFAULT_DT_IMAG,
    tol: float = GROUND_STATE_TOL,
    max_steps: int = MAX_IMAG_STEPS,
) -> WaveField:
    """Like ground_state_imaginary_time, retried with a doubled budget on NonConvergence."""
    return ImaginaryTimeRelaxation(u, g_n, grid, dt_imag, tol, max_steps).relax_with_retries()


# ---------------------------------------------------------------------------
# Real time
# ---------------------------------------------------------------------------

def max_time_step(protocol: TrapProtocol, delta: float = 0.0) -> float:
    """Largest admissible real-time step: DT_SAFETY / max(1, sqrt(delta), sqrt(max|u|))."""
    fastest = max(1.0, math.sqrt(max(delta, 0.0)), math.sqrt(protocol.max_abs_u))
    return DT_SAFETY / fastest


@dataclass
class SplitStepResult:
    """Final field plus the recorded observable history and density snapshots."""

    final_field: WaveField
    observables: pd.DataFrame
    snapshots: Dict[float, np.ndarray] = field(default_factory=dict)
    n_steps: int = 0

    @property
    def widths(self) -> np.ndarray:
        return self.observables['width'].to_numpy()

    @property
    def times(self) -> np.ndarray:
        return self.observables['t'].to_numpy()


def evolve_split_step(
    initial: WaveField,
    protocol: TrapProtocol,
    g_n: float,
    dt: Optional[float] = None,
    record_stride: int = DEFAULT_RECORD_STRIDE,
    snapshot_times: Iterable[float] = (),
    norm_tol: float = NORM_DRIFT_TOL,
    delta: float = 0.0,
) -> SplitStepResult:
    """
    Strang-split real-time evolution under a piecewise protocol.

    Each segment is cut into an integer number of equal steps so every jump
    falls on a step boundary; u is evaluated at the middle of each step.

    Args:
        initial: starting field
        protocol: trap control u(t)
        g_n: nonlinearity
        dt: requested step (defaults to the largest admissible one)
        record_stride: record observables every this many steps (plus start and end)
        snapshot_times: times at which to store |psi|^2
        norm_tol: allowed deviation of the norm from its initial value
        delta: control bound, also used to cap the step

    Raises:
        DomainError: if dt exceeds the admissible step
        NormDrift: if the norm drifts beyond norm_tol
    """
    dt_max = max_time_step(protocol, delta)
    if dt is None:
        dt = dt_max
    if not dt > 0:
        raise DomainError(f"time step must be positive, got {dt}")
    if dt > dt_max * (1.0 + 1e-12):
        raise DomainError(f"time step {dt:g} exceeds the admissible {dt_max:g}")

    grid = initial.grid
    x_sq_half = 0.5 * grid.x ** 2
    k_sq = grid.k ** 2
    psi = initial.values.copy()
    norm0 = initial.norm()
    t = initial.time

    pending: List[float] = sorted(float(s) for s in snapshot_times)
    snapshots: Dict[float, np.ndarray] = {}
    rows: List[Sequence[float]] = []

    def record(t_now: float, u_now: float):
        current = WaveField(grid, psi, t_now)
        norm = current.norm()
        if abs(norm - norm0) > norm_tol:
            raise NormDrift(f"norm drifted to {norm:.12g} at t={t_now:.6g}")
        second_moment = np.sum(grid.x ** 2 * current.density) * grid.dx / norm
        rows.append((t_now, norm, math.sqrt(2.0 * second_moment), gpe_energy(current, u_now, g_n)))

    def take_snapshots(t_now: float):
        while pending and pending[0] <= t_now + 1e-12:
            snapshots[pending.pop(0)] = np.abs(psi) ** 2

    u_start = protocol.segments[0].control.at(0.0) if protocol.segments else 1.0
    record(t, u_start)
    take_snapshots(t)

    n_total = 0
    for idx, segment in enumerate(protocol.segments):
        n_steps = max(1, math.ceil(segment.duration / dt - 1e-9))
        h = segment.duration / n_steps
        kinetic_half = np.exp(-0.25j * k_sq * h)
        t_seg = t

        for step in range(n_steps):
            u_mid = segment.control.at((step + 0.5) * h)
            psi = np.fft.ifft(kinetic_half * np.fft.fft(psi))
            psi *= np.exp(-1j * (u_mid * x_sq_half + g_n * np.abs(psi) ** 2) * h)
            psi = np.fft.ifft(kinetic_half * np.fft.fft(psi))
            n_total += 1
            t = t_seg + (step + 1) * h

            if n_total % record_stride == 0 or step == n_steps - 1:
                record(t, segment.control.at((step + 1) * h))
            take_snapshots(t)

        logger.debug(f"Segment {idx}: {n_steps} steps of {h:.6g}")

    final = WaveField(grid, psi, t)
    observables = pd.DataFrame(rows, columns=OBSERVABLE_COLUMNS)
    return SplitStepResult(final, observables, snapshots, n_total)


def simulate_protocol(
    protocol: TrapProtocol,
    g_n: float,
    u_initial: float,
    u_final: float,
    grid: Grid,
    dt: Optional[float] = None,
    dt_imag: float = DEFAULT_DT_IMAG,
    record_stride: int = DEFAULT_RECORD_STRIDE,
    snapshot_times: Iterable[float] = (),
    delta: float = 0.0,
):
    """
    Prepare the initial ground state, evolve under the protocol and compare with
    the final-trap ground state.

    Returns:
        (SplitStepResult, target field, fidelity)
    """
    initial = find_ground_state(u_initial, g_n, grid, dt_imag)
    target = find_ground_state(u_final, g_n, grid, dt_imag)
    result = evolve_split_step(
        initial, protocol, g_n, dt,
        record_stride=record_stride, snapshot_times=snapshot_times, delta=delta,
    )
    value = fidelity(target, result.final_field)
    logger.info(f"GPE run: t_f={protocol.t_f:.6g}, steps={result.n_steps}, fidelity={value:.10f}")
    return result, target, value
