"""
Finite-difference evaluation of the conservation-law identity on sampled fields.

Jets are approximated by central stencils (periodic in t), the fluxes are evaluated
pointwise with evaluate_at_point, and their FD divergence is compared with chi * Delta
evaluated from the same jets. Norms skip a margin near the x and y ends where the
rolled stencils wrap around, and one stencil half-width at both t ends: u is periodic
in t but a flux carrying explicit t from chi is not.

A refinement study passes its coarsest grid as the norm window; the dropped bands then
keep their physical width at every level.
"""
from fractions import Fraction

import numpy as np

from src.errors import InvalidDimensionError, StencilError
from src.jet.index import DerivIndex
from src.jet.polynomial import DiffPolynomial, evaluate_at_point, substitute_params
from src.model.gnpwe import Characteristic, build_equation, build_fluxes, closed_form_residual
from src.numerics.grid import FModel, GridField, GridSpec, axis_of_slot
from src.numerics.stencils import derivative, half_width, passes


def grid_jets(field: GridField, indices) -> dict[DerivIndex, np.ndarray]:
    """FD approximations of u_J for every requested multi-index J."""
    grid = field.grid
    jets = {}
    for index in indices:
        values = field.values
        for slot, k in enumerate(index.slots):
            if k:
                values = derivative(values, axis_of_slot(slot), grid.spacing(slot), k, grid.stencil_order)
        jets[index] = values
    return jets


def _evaluate(poly: DiffPolynomial, grid: GridSpec, coords, jets, fm: FModel) -> np.ndarray:
    value = evaluate_at_point(poly, coords, jet=jets, fmodel=fm)
    return np.broadcast_to(np.asarray(value, dtype=float), grid.shape)


def interior_margin(grid: GridSpec, indices) -> int:
    """Points dropped at each end of the x and y axes: jet stencils plus one divergence stencil."""
    depth = max((passes(k) for index in indices for k in index.slots[1:]), default=0)
    return half_width(grid.stencil_order) * (depth + 1)


def axis_margins(grid: GridSpec, margin: int, window: GridSpec | None = None) -> tuple[int, int, int]:
    """
    Points dropped at each end of the (t, x, y) axes.

    With a window grid (the coarsest level of a refinement study) the dropped band keeps
    the physical width it has on the window, so every level is measured over the same
    region.
    """
    margins = (half_width(grid.stencil_order), margin, margin)
    if window is None:
        return margins
    if (window.n, window.lx, window.ly) != (grid.n, grid.lx, grid.ly):
        raise StencilError("The norm window must cover the same domain as the field grid")
    coarse = axis_margins(window, margin)
    spacings = zip((window.ht, window.hx, window.hy), (grid.ht, grid.hx, grid.hy))
    return tuple(max(m, round(c * hw / hg)) for m, c, (hw, hg) in zip(margins, coarse, spacings))


def interior(grid: GridSpec, margins: tuple[int, int, int]) -> tuple[slice, ...]:
    t_margin, x_margin, y_margin = margins
    for length, name, margin in [(grid.nx, "nx", x_margin), (grid.ny, "ny", y_margin), (grid.nt, "nt", t_margin)]:
        if length <= 2 * margin:
            raise StencilError(f"Grid too coarse: {name}={length} leaves no interior for a margin of {margin}")
    return (
        slice(x_margin, grid.nx - x_margin),
        slice(t_margin, grid.nt - t_margin),
    ) + (slice(y_margin, grid.ny - y_margin),) * grid.n


def interior_norms(values: np.ndarray, grid: GridSpec, margins: tuple[int, int, int]) -> tuple[float, float]:
    """(max norm, h-weighted L2 norm) over the interior points."""
    inner = values[interior(grid, margins)]
    if inner.size == 0:
        return 0.0, 0.0
    cell = grid.ht * grid.hx * grid.hy**grid.n
    return float(np.max(np.abs(inner))), float(np.sqrt(np.sum(inner**2) * cell))


def _substituted(poly: DiffPolynomial, a_val, b_val) -> DiffPolynomial:
    return substitute_params(poly, Fraction(a_val), Fraction(b_val))


def fd_residual_field(
    chi: Characteristic, field: GridField, fm: FModel, a_val, b_val, window: GridSpec | None = None
) -> tuple[np.ndarray, tuple[int, int, int], dict[DerivIndex, np.ndarray]]:
    """
    FD divergence of the fluxes minus chi * Delta on every grid point.

    Returns the residual array, the (t, x, y) interior margins and the jets used.
    """
    grid = field.grid
    if chi.chi.max_y_index() > grid.n:
        raise InvalidDimensionError(f"Characteristic uses y{chi.chi.max_y_index()} but the grid has n={grid.n}")
    eq = build_equation(grid.n)
    law = build_fluxes(eq, chi)
    components = [_substituted(p, a_val, b_val) for p in law.components()]
    delta = _substituted(eq.delta, a_val, b_val)
    chi_poly = _substituted(chi.chi, a_val, b_val)

    indices = set(delta.jet_indices()) | {DerivIndex()}
    for p in components:
        indices |= p.jet_indices()
    margins = axis_margins(grid, interior_margin(grid, indices), window)
    interior(grid, margins)

    jets = grid_jets(field, indices)
    coords = grid.coordinates()
    order = grid.stencil_order
    rho, sigma, *zeta = (_evaluate(p, grid, coords, jets, fm) for p in components)

    div = derivative(rho, axis_of_slot(0), grid.ht, 1, order)
    div = div + derivative(sigma, axis_of_slot(1), grid.hx, 1, order)
    for j, zeta_j in enumerate(zeta, start=1):
        div = div + derivative(zeta_j, axis_of_slot(1 + j), grid.hy, 1, order)
    rhs = _evaluate(chi_poly, grid, coords, jets, fm) * _evaluate(delta, grid, coords, jets, fm)
    return div - rhs, margins, jets


def fd_divergence_residual(
    chi: Characteristic, field: GridField, fm: FModel, a_val, b_val, window: GridSpec | None = None
) -> tuple[float, float]:
    residual, margins, _ = fd_residual_field(chi, field, fm, a_val, b_val, window)
    return interior_norms(residual, field.grid, margins)


def fd_closed_form_difference(
    chi: Characteristic, field: GridField, fm: FModel, a_val, b_val, window: GridSpec | None = None
) -> tuple[float, float]:
    """Norms of the FD residual minus the sampled closed form -(a u_t + f) chi_tt - u (chi_xt + b Delta_y chi)."""
    residual, margins, jets = fd_residual_field(chi, field, fm, a_val, b_val, window)
    grid = field.grid
    closed = _substituted(closed_form_residual(build_equation(grid.n), chi), a_val, b_val)
    missing = closed.jet_indices() - set(jets)
    if missing:
        jets = jets | grid_jets(field, missing)
    expected = _evaluate(closed, grid, grid.coordinates(), jets, fm)
    return interior_norms(residual - expected, grid, margins)
