"""Uniform 1D grid on (0, pi) with homogeneous Neumann (no-flux) operators.

Layout
------
The domain (0, pi) is discretized with ``n`` interior nodes

    z_i = i * h,  i = 1..n,  h = pi / (n + 1),

so the boundary points 0 and pi are not nodes.  No-flux boundaries are
realized by mirror ghost nodes: the ghost at -h (respectively pi + h)
carries the value of the first (last) interior node.  The second
difference at an end node is then taken on the non-uniform triple
{-h, h, 2h}, which collapses to

    Lf[0] = (2/3) (f[1] - f[0]) / h^2,

second-order accurate for fields with zero slope at the boundary.

Quadrature extends the end values constantly onto the boundary strips
(trapezoid with mirrored ends), i.e. weights (3/2, 1, ..., 1, 3/2) * h.
These two choices pair up exactly: the quadrature of the discrete
Laplacian telescopes to zero for every field, a discrete divergence
theorem with no-flux boundaries.

The Neumann eigenpairs of the continuous operator are mu_n = n^2 with
eigenfunctions sqrt(2/pi) cos(n z) (constant for n = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid1D",
    "Field",
    "build_grid",
    "neumann_laplacian",
    "laplacian_matrix",
    "integrate",
    "gradient",
    "eigenpair",
]


@dataclass(eq=False)
class Grid1D:
    """Uniform interior-node grid on (0, pi).

    Attributes:
        n_interior: number of interior nodes.
        h: node spacing, pi / (n_interior + 1).
        nodes: node coordinates, strictly increasing in (0, pi).
    """

    n_interior: int
    h: float
    nodes: np.ndarray = field(repr=False)

    def __len__(self):
        return self.n_interior


@dataclass(eq=False)
class Field:
    """One scalar function sampled on a grid (a density or a human profile)."""

    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_interior,):
            raise ValueError(
                f"field has {self.values.shape} values for a grid of "
                f"{self.grid.n_interior} nodes"
            )

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())


def build_grid(n_interior: int) -> Grid1D:
    """Build the uniform grid with ``n_interior`` nodes on (0, pi).

    Rejects n_interior < 3: the three-point Laplacian stencil needs at
    least one genuinely interior row.
    """
    if n_interior < 3:
        raise ValueError(f"n_interior must be >= 3, got {n_interior}")
    h = np.pi / (n_interior + 1)
    nodes = h * np.arange(1, n_interior + 1)
    return Grid1D(n_interior=int(n_interior), h=h, nodes=nodes)


def constant_field(grid: Grid1D, value: float) -> Field:
    return Field(grid, np.full(grid.n_interior, float(value)))


def field_from_function(grid: Grid1D, fn) -> Field:
    return Field(grid, np.asarray(fn(grid.nodes), dtype=float))


def neumann_laplacian(f: Field) -> Field:
    """Second difference with mirror-ghost no-flux ends.

    Interior rows are the standard (f[i-1] - 2 f[i] + f[i+1]) / h^2; the
    end rows use the mirrored ghost as described in the module docstring.
    """
    v = f.values
    h2 = f.grid.h * f.grid.h
    out = np.empty_like(v)
    out[1:-1] = (v[:-2] - 2.0 * v[1:-1] + v[2:]) / h2
    out[0] = (2.0 / 3.0) * (v[1] - v[0]) / h2
    out[-1] = (2.0 / 3.0) * (v[-2] - v[-1]) / h2
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("laplacian produced non-finite values")
    return Field(f.grid, out)


def laplacian_matrix(grid: Grid1D) -> np.ndarray:
    """Dense matrix of ``neumann_laplacian``; convenient for Newton solves."""
    n = grid.n_interior
    h2 = grid.h * grid.h
    L = np.zeros((n, n))
    idx = np.arange(1, n - 1)
    L[idx, idx - 1] = 1.0 / h2
    L[idx, idx] = -2.0 / h2
    L[idx, idx + 1] = 1.0 / h2
    L[0, 0] = -2.0 / (3.0 * h2)
    L[0, 1] = 2.0 / (3.0 * h2)
    L[-1, -1] = -2.0 / (3.0 * h2)
    L[-1, -2] = 2.0 / (3.0 * h2)
    return L


def quadrature_weights(grid: Grid1D) -> np.ndarray:
    w = np.full(grid.n_interior, grid.h)
    w[0] = w[-1] = 1.5 * grid.h
    return w


def integrate(f: Field) -> float:
    """Composite quadrature of ``f`` over (0, pi).

    Trapezoid rule after constant (mirror) extension of the end values
    onto the boundary strips; exact for constants, O(h^2) otherwise.
    """
    return float(np.dot(quadrature_weights(f.grid), f.values))


def gradient(f: Field) -> Field:
    """Central-difference gradient; mirrored ghosts at the ends.

    End rows differentiate on the non-uniform mirrored triple, giving
    (2/3)(f[1] - f[0])/h, one-sided second order for no-flux fields.
    """
    v = f.values
    h = f.grid.h
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    out[0] = (2.0 / 3.0) * (v[1] - v[0]) / h
    out[-1] = -(2.0 / 3.0) * (v[-2] - v[-1]) / h
    return Field(f.grid, out)


def eigenpair(n: int, grid: Grid1D) -> tuple[float, Field]:
    """n-th no-flux eigenvalue/eigenfunction of minus the Laplacian.

    Returns (n^2, sqrt(2/pi) cos(n z)); the n = 0 eigenfunction is the
    constant normalized to unit L2 norm, 1/sqrt(pi).
    """
    if n < 0:
        raise ValueError(f"mode index must be >= 0, got {n}")
    if n == 0:
        return 0.0, constant_field(grid, 1.0 / np.sqrt(np.pi))
    vals = np.sqrt(2.0 / np.pi) * np.cos(n * grid.nodes)
    return float(n * n), Field(grid, vals)
