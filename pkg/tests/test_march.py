"""
Tests for src/numerics/march.py
"""
from fractions import Fraction

import numpy as np
import pytest

from src.config import config
from src.errors import GaugeError, InvalidDimensionError, SolverDivergenceError
from src.model.gnpwe import Characteristic
from src.jet import DiffPolynomial
from src.numerics.convergence import asymptotic_order, convergence_study
from src.numerics.fd import fd_divergence_residual
from src.numerics.grid import FModel, GridSpec
from src.numerics.march import (
    ManufacturedProblem,
    XMarchProblem,
    march_solver_n1,
    solve_manufactured,
    spectral_t_derivative,
    x_refined,
)

F_SQUARED = FModel((Fraction(0), Fraction(0), Fraction(1)))


def gaussian_profile(grid: GridSpec, amplitude: float) -> np.ndarray:
    return amplitude * np.sin(grid.t)[:, None] * np.exp(-grid.y[None, :] ** 2)


class TestSpectral:
    def test_t_derivatives_of_sine(self):
        grid = GridSpec(nt=16)
        values = np.sin(grid.t)[:, None] * np.ones((1, 3))
        np.testing.assert_allclose(spectral_t_derivative(values, 1), np.cos(grid.t)[:, None] * np.ones((1, 3)), atol=1e-13)
        np.testing.assert_allclose(spectral_t_derivative(values, 2), -values, atol=1e-13)

    def test_linear_rhs_single_mode(self):
        """For tiny single-mode data only the dispersive term survives: P(-a u_ttt) = a u."""
        grid = GridSpec(nt=16, ny=9)
        problem = XMarchProblem(grid, FModel((Fraction(0), Fraction(0), Fraction(1, 2))), 2.0, 0.0)
        u = 1e-8 * np.sin(grid.t)[:, None] * np.ones((1, grid.ny))
        np.testing.assert_allclose(problem.rhs(0.0, u), 2 * u, rtol=0, atol=1e-14)

    def test_dealias_filter_removes_high_modes(self):
        grid = GridSpec(nt=16, ny=9)
        high = np.cos(7 * grid.t)[:, None] * np.ones((1, grid.ny))
        source = XMarchProblem(grid, F_SQUARED, 0.0, 0.0, forcing=lambda x: high)
        assert np.max(np.abs(source.rhs(0.0, np.zeros_like(high)))) < 1e-14
        kept = XMarchProblem(grid, F_SQUARED, 0.0, 0.0, forcing=lambda x: high, dealias=False)
        assert np.max(np.abs(kept.rhs(0.0, np.zeros_like(high)))) > 0.1


class TestMarch:
    def test_zero_data_stays_zero(self):
        grid = GridSpec(nt=16, ny=17, nx=5, lx=0.1)
        field = march_solver_n1(F_SQUARED, 1, 1, np.zeros((grid.nt, grid.ny)), grid)
        assert field.values.shape == grid.shape
        assert np.max(np.abs(field.values)) == 0.0

    def test_initial_slice_kept(self):
        grid = GridSpec(nt=16, ny=17, nx=5, lx=0.1)
        initial = gaussian_profile(grid, 0.05)
        field = march_solver_n1(F_SQUARED, -1, 1, initial, grid)
        np.testing.assert_array_equal(field.values[0], initial)

    def test_gauge_violation(self):
        grid = GridSpec(nt=16, ny=17, nx=5)
        with pytest.raises(GaugeError):
            march_solver_n1(F_SQUARED, 1, 1, np.ones((grid.nt, grid.ny)), grid)

    def test_only_one_transverse_variable(self):
        grid = GridSpec(n=2, nt=8, ny=9, nx=3)
        with pytest.raises(InvalidDimensionError):
            march_solver_n1(F_SQUARED, 1, 1, np.zeros((8, 9)), grid)

    def test_initial_shape_checked(self):
        grid = GridSpec(nt=16, ny=17, nx=5)
        with pytest.raises(InvalidDimensionError):
            march_solver_n1(F_SQUARED, 1, 1, np.zeros((16, 9)), grid)

    def test_blow_up_detected(self, mocker):
        mocker.patch.object(config, "blowup_threshold", 1e-6)
        grid = GridSpec(nt=16, ny=17, nx=5, lx=0.1)
        with pytest.raises(SolverDivergenceError):
            march_solver_n1(F_SQUARED, 1, 1, gaussian_profile(grid, 0.05), grid)


class TestManufactured:
    def test_forcing_makes_exact_solution_stationary(self):
        """With u = u* the semi-discrete right-hand side equals u*_x."""
        grid = GridSpec(nt=16, ny=17, nx=11, ly=3.0, lx=0.5)
        problem = ManufacturedProblem(grid, F_SQUARED, 1.0, 1.0, amplitude=0.1, frequency=4.0)
        march = XMarchProblem(grid, F_SQUARED, 1.0, 1.0, forcing=problem.forcing)
        x = 0.3
        t, decay = grid.t[:, None], np.exp(-grid.y[None, :] ** 2)
        u_x = -0.1 * 4.0 * np.sin(t) * np.sin(4.0 * x) * decay
        np.testing.assert_allclose(march.rhs(x, problem.exact(x)), u_x, atol=1e-12)

    def test_forcing_builds_operator_once(self, mocker):
        grid = GridSpec(nt=16, ny=17, nx=11, ly=3.0, lx=0.5)
        problem = ManufacturedProblem(grid, F_SQUARED, 1.0, 1.0, amplitude=0.1, frequency=4.0)
        constructor = mocker.patch("src.numerics.march.XMarchProblem", wraps=XMarchProblem)
        for x in (0.0, 0.05, 0.1):
            problem.forcing(x)
        assert constructor.call_count == 1

    def test_rk4_order(self):
        """The error against u* is pure time-stepping error in x, fourth order."""
        base = GridSpec(nt=16, ny=17, nx=11, ly=3.0, lx=0.5)

        def run(level):
            problem = ManufacturedProblem(x_refined(base, level), F_SQUARED, 1.0, 1.0, amplitude=0.1, frequency=4.0)
            return (problem.grid.hx, *problem.error(solve_manufactured(problem)))

        rows = convergence_study(run, 3)
        assert rows[-1].max_norm < 1e-6
        assert 3.7 <= asymptotic_order(rows) <= 4.3

    def test_x_refined_keeps_t_and_y(self):
        base = GridSpec(nt=16, ny=17, nx=11)
        fine = x_refined(base, 2)
        assert (fine.nt, fine.ny, fine.nx) == (16, 17, 41)


def test_unforced_solution_conserves_time_law():
    """The FD residual of the chi = t law on computed solutions shrinks at second order."""
    base = GridSpec(nt=16, ny=17, nx=17, ly=4.0, lx=0.2)
    chi = Characteristic(DiffPolynomial.var("t"))

    def run(level):
        grid = base.refined(level)
        field = march_solver_n1(F_SQUARED, -1, 1, gaussian_profile(grid, 0.05), grid)
        return (grid.h, *fd_divergence_residual(chi, field, F_SQUARED, -1, 1, window=base))

    rows = convergence_study(run, 3)
    assert 1.7 <= asymptotic_order(rows) <= 2.3
