"""
x-marching solver for the n = 1 equation

    d/dx (u_t) = -(f(u))_tt - a u_ttt - b u_yy + F

t is periodic and handled spectrally: the right-hand side is integrated once in t by
dividing by i*k on the nonzero modes (zero t-mean gauge). u_yy uses the FD stencil of
the grid with zero ghost values beyond +-ly. The march in x is classical RK4.
"""
from collections.abc import Callable
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from rich.console import Console

from src.config import config
from src.errors import GaugeError, InvalidDimensionError, SolverDivergenceError
from src.numerics.grid import FModel, GridField, GridSpec
from src.numerics.stencils import second_derivative_zero_ghost

console = Console(stderr=True)

Forcing = Callable[[float], np.ndarray]


def wavenumbers(nt: int) -> np.ndarray:
    return np.fft.fftfreq(nt, 1.0 / nt)


def spectral_t_derivative(values: np.ndarray, k: int) -> np.ndarray:
    """k-th t-derivative along axis 0 of a (nt, ny) array; odd derivatives drop the Nyquist mode."""
    nt = values.shape[0]
    wave = wavenumbers(nt)
    symbol = (1j * wave) ** k
    if k % 2:
        symbol[nt // 2] = 0.0
    hat = np.fft.fft(values, axis=0)
    return np.real(np.fft.ifft(symbol[:, None] * hat, axis=0))


@dataclass
class XMarchProblem:
    """Semi-discrete right-hand side of the x-march on one grid."""

    grid: GridSpec
    fm: FModel
    a_val: float
    b_val: float
    forcing: Forcing | None = None
    dealias: bool = True

    def __post_init__(self):
        nt = self.grid.nt
        wave = wavenumbers(nt)
        inverse = np.zeros(nt, dtype=complex)
        nonzero = wave != 0
        inverse[nonzero] = 1.0 / (1j * wave[nonzero])
        inverse[nt // 2] = 0.0
        if self.dealias:
            inverse[np.abs(wave) > nt / 3] = 0.0
        self._inverse_dt = inverse[:, None]

    def y_operator(self, u: np.ndarray) -> np.ndarray:
        return second_derivative_zero_ghost(u, 1, self.grid.hy, self.grid.stencil_order)

    def t_operator(self, u: np.ndarray) -> np.ndarray:
        """(f(u))_tt + a u_ttt."""
        return spectral_t_derivative(self.fm.derivative(0, u), 2) + self.a_val * spectral_t_derivative(u, 3)

    def rhs(self, x: float, u: np.ndarray) -> np.ndarray:
        source = -self.t_operator(u) - self.b_val * self.y_operator(u)
        if self.forcing is not None:
            source = source + self.forcing(x)
        hat = np.fft.fft(source, axis=0)
        return np.real(np.fft.ifft(self._inverse_dt * hat, axis=0))


def check_gauge(initial: np.ndarray):
    mean = np.mean(initial, axis=0)
    tolerance = 1e-12 * max(1.0, float(np.max(np.abs(initial))))
    if np.max(np.abs(mean)) > tolerance:
        raise GaugeError(f"Initial data has nonzero t-mean (max |mean| = {np.max(np.abs(mean)):.3e})")


def rk4_step(problem: XMarchProblem, x: float, u: np.ndarray, h: float) -> np.ndarray:
    k1 = problem.rhs(x, u)
    k2 = problem.rhs(x + h / 2, u + h / 2 * k1)
    k3 = problem.rhs(x + h / 2, u + h / 2 * k2)
    k4 = problem.rhs(x + h, u + h * k3)
    return u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def march_solver_n1(
    fm: FModel,
    a_val,
    b_val,
    initial: np.ndarray,
    grid: GridSpec,
    forcing: Forcing | None = None,
) -> GridField:
    """March u(t, y) from x = 0 to x = lx; returns the full (nx, nt, ny) field."""
    if grid.n != 1:
        raise InvalidDimensionError(f"The x-marching solver supports n = 1 only, got n={grid.n}")
    initial = np.asarray(initial, dtype=float)
    if initial.shape != (grid.nt, grid.ny):
        raise InvalidDimensionError(f"Initial data must have shape {(grid.nt, grid.ny)}, got {initial.shape}")
    check_gauge(initial)

    problem = XMarchProblem(grid, fm, float(a_val), float(b_val), forcing, config.dealias)
    threshold = config.blowup_threshold
    values = np.empty(grid.shape)
    values[0] = initial
    u = initial
    h = grid.hx
    for i in range(1, grid.nx):
        u = rk4_step(problem, (i - 1) * h, u, h)
        peak = float(np.max(np.abs(u)))
        if not np.isfinite(peak) or peak > threshold:
            raise SolverDivergenceError(f"Solution blew up at x = {i * h:.4g} (max |u| = {peak:.3e})")
        values[i] = u
    console.print(f"[dim]Marched {grid.nx - 1} steps of hx={h:.4g}, max |u| = {np.max(np.abs(values)):.3e}[/dim]")
    return GridField(values, grid)


@dataclass(frozen=True)
class ManufacturedProblem:
    """u* = eps sin(t) cos(kx x) exp(-y^2) with the forcing that makes it exact for the semi-discrete march."""

    grid: GridSpec
    fm: FModel
    a_val: float
    b_val: float
    amplitude: float = 0.1
    frequency: float = 1.0

    def _profile(self) -> tuple[np.ndarray, np.ndarray]:
        t = self.grid.t[:, None]
        decay = np.exp(-self.grid.y[None, :] ** 2)
        return t, decay

    def exact(self, x: float) -> np.ndarray:
        t, decay = self._profile()
        return self.amplitude * np.sin(t) * np.cos(self.frequency * x) * decay

    def initial(self) -> np.ndarray:
        return self.exact(0.0)

    @cached_property
    def operator(self) -> XMarchProblem:
        """Unforced discrete operator the forcing is built from."""
        return XMarchProblem(self.grid, self.fm, self.a_val, self.b_val)

    def forcing(self, x: float) -> np.ndarray:
        t, decay = self._profile()
        u = self.exact(x)
        u_xt = -self.amplitude * self.frequency * np.cos(t) * np.sin(self.frequency * x) * decay
        return u_xt + self.operator.t_operator(u) + self.b_val * self.operator.y_operator(u)

    def exact_field(self) -> np.ndarray:
        return np.stack([self.exact(x) for x in self.grid.x])

    def error(self, field: GridField) -> tuple[float, float]:
        """(max, hx-weighted L2) error of a computed field against u*."""
        diff = field.values - self.exact_field()
        cell = self.grid.ht * self.grid.hx * self.grid.hy
        return float(np.max(np.abs(diff))), float(np.sqrt(np.sum(diff**2) * cell))


def solve_manufactured(problem: ManufacturedProblem) -> GridField:
    return march_solver_n1(problem.fm, problem.a_val, problem.b_val, problem.initial(), problem.grid, problem.forcing)


def x_refined(grid: GridSpec, level: int) -> GridSpec:
    return replace(grid, nx=(grid.nx - 1) * 2**level + 1)
