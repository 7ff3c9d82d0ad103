"""
Sampling grids and fields for the numerical checks.

Fields are indexed (ix, it, iy1[, iy2]): x is the marching direction and comes
first, t is periodic on [0, 2*pi), each y_j lives on [-ly, ly] with decaying data.
"""
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np
from numpy.polynomial import Polynomial

from src.errors import ExprParseError, InvalidDimensionError, JetDomainError, StencilError
from src.jet.index import DerivIndex

STENCIL_ORDERS = (2, 4)


@dataclass(frozen=True)
class GridSpec:
    n: int = 1
    nt: int = 32
    ny: int = 33
    nx: int = 33
    ly: float = 4.0
    lx: float = 2.0
    stencil_order: int = 2

    def __post_init__(self):
        if self.n not in (1, 2):
            raise InvalidDimensionError(f"Grids support n = 1 or 2, got n={self.n}")
        if self.nt < 8 or self.ny < 8:
            raise StencilError(f"Need nt, ny >= 8, got nt={self.nt}, ny={self.ny}")
        if self.nt % 2:
            raise StencilError(f"nt must be even, got {self.nt}")
        if self.nx < 2:
            raise StencilError(f"Need at least 2 x-stations, got nx={self.nx}")
        if self.lx <= 0 or self.ly <= 0:
            raise StencilError("Domain lengths lx and ly must be positive")
        if self.stencil_order not in STENCIL_ORDERS:
            raise StencilError(f"Stencil order must be one of {STENCIL_ORDERS}, got {self.stencil_order}")

    @property
    def ht(self) -> float:
        return 2 * np.pi / self.nt

    @property
    def hx(self) -> float:
        return self.lx / (self.nx - 1)

    @property
    def hy(self) -> float:
        return 2 * self.ly / (self.ny - 1)

    @property
    def h(self) -> float:
        """Coarsest spacing; all three halve together under refined()."""
        return max(self.ht, self.hx, self.hy)

    @property
    def t(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.nt) / self.nt

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.lx, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(-self.ly, self.ly, self.ny)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.nx, self.nt) + (self.ny,) * self.n

    def spacing(self, slot: int) -> float:
        """Spacing along a jet slot (0 = t, 1 = x, 1 + j = y_j)."""
        if slot == 0:
            return self.ht
        if slot == 1:
            return self.hx
        return self.hy

    def coordinates(self) -> dict[str, np.ndarray]:
        """Base-variable arrays broadcast to the field shape, keyed t, x, y1..yn."""
        mesh = np.meshgrid(self.x, self.t, *([self.y] * self.n), indexing="ij")
        coords = {"x": mesh[0], "t": mesh[1]}
        for j in range(1, self.n + 1):
            coords[f"y{j}"] = mesh[1 + j]
        return coords

    def refined(self, level: int) -> "GridSpec":
        factor = 2**level
        return replace(
            self,
            nt=self.nt * factor,
            nx=(self.nx - 1) * factor + 1,
            ny=(self.ny - 1) * factor + 1,
        )


def axis_of_slot(slot: int) -> int:
    """Array axis holding a jet slot."""
    if slot == 0:
        return 1
    if slot == 1:
        return 0
    return slot


@dataclass(frozen=True)
class GridField:
    values: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise StencilError(f"Field shape {self.values.shape} does not match grid shape {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise StencilError("Field contains non-finite values")


@dataclass(frozen=True)
class FModel:
    """f(u) as a polynomial in u with rational coefficients, lowest degree first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if not any(self.coefficients[2:]):
            raise JetDomainError("f must have a nonzero second derivative")

    @classmethod
    def from_text(cls, text: str) -> "FModel":
        from src.expr.parser import parse

        poly = parse(text, 1)
        coeffs: dict[int, Fraction] = {}
        for (pa, pb, base, fsym, jet, funcs), coeff in poly.items():
            if pa or pb or base or fsym or funcs or any(idx != DerivIndex() for idx, _ in jet):
                raise ExprParseError(f"f must be a polynomial in u only, got {text!r}", text, 0)
            degree = sum(e for _, e in jet)
            coeffs[degree] = coeff
        width = max(coeffs, default=0) + 1
        return cls(tuple(coeffs.get(k, Fraction(0)) for k in range(width)))

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial([float(c) for c in self.coefficients])

    def derivative(self, k: int, u):
        return self.polynomial.deriv(k)(u) if k else self.polynomial(u)


def manufactured_field(grid: GridSpec, amplitude: float = 1.0) -> GridField:
    """u = A sin(t) cos(x) exp(-|y|^2) sampled on the grid."""
    coords = grid.coordinates()
    decay = sum(coords[f"y{j}"] ** 2 for j in range(1, grid.n + 1))
    values = amplitude * np.sin(coords["t"]) * np.cos(coords["x"]) * np.exp(-decay)
    return GridField(values, grid)


_HEADER = ("nt", "ny", "nx", "ly", "lx", "n")


def save_field(field: GridField, path: Path):
    """Write a field as CSV (header line, then row-major values) or as .bin."""
    grid = field.grid
    header = {key: getattr(grid, key) for key in _HEADER}
    if path.suffix == ".bin":
        with open(path, "wb") as f:
            f.write((json.dumps({**header, "stencil_order": grid.stencil_order}) + "\n").encode())
            f.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())
        return
    with open(path, "w") as f:
        f.write(",".join(_HEADER) + "\n")
        f.write(",".join(str(header[key]) for key in _HEADER) + "\n")
        np.savetxt(f, field.values.reshape(1, -1), delimiter=",", fmt="%.17g")


def load_field(path: Path, stencil_order: int = 2) -> GridField:
    if path.suffix == ".bin":
        with open(path, "rb") as f:
            header = json.loads(f.readline())
            values = np.frombuffer(f.read(), dtype="<f8")
        stencil_order = header.pop("stencil_order", stencil_order)
    else:
        with open(path) as f:
            names = f.readline().strip().split(",")
            raw = f.readline().strip().split(",")
            header = dict(zip(names, raw))
            values = np.loadtxt(f, delimiter=",", ndmin=1)
    grid = GridSpec(
        n=int(header["n"]),
        nt=int(header["nt"]),
        ny=int(header["ny"]),
        nx=int(header["nx"]),
        ly=float(header["ly"]),
        lx=float(header["lx"]),
        stencil_order=stencil_order,
    )
    return GridField(np.array(values, dtype=float).reshape(grid.shape), grid)
