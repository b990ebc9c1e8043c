"""Simplicial meshes, P1 grid functions, and one-point quadrature.

Meshes are immutable after construction and safe to share across threads;
grid functions are plain values.  All integrals in the toolkit reduce to
``integrate``: a midpoint (element-centroid) rule that is exact for
element-wise-constant data.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, ShapeError

__all__ = [
    "Mesh",
    "GridFunction",
    "build_interval_mesh",
    "build_rect_mesh",
    "element_gradients",
    "gradient_of",
    "centroid_values",
    "integrate",
]


@dataclass(eq=False)
class Mesh:
    """A 1-D or 2-D simplicial mesh with a Dirichlet boundary mask."""

    dimension: int
    vertices: np.ndarray          # (n_vertices, dimension)
    elements: np.ndarray          # (n_elements, dimension + 1) vertex indices
    boundary_mask: np.ndarray     # (n_vertices,) bool
    element_measures: np.ndarray  # (n_elements,) lengths / areas

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    @property
    def measure(self) -> float:
        """Total measure of the meshed domain."""
        return float(self.element_measures.sum())

    @cached_property
    def element_centroids(self) -> np.ndarray:
        """(n_elements, dimension) centroid coordinates."""
        return self.vertices[self.elements].mean(axis=1)

    @cached_property
    def interior(self) -> np.ndarray:
        """Indices of the non-boundary vertices."""
        return np.flatnonzero(~self.boundary_mask)

    @cached_property
    def hat_gradients(self) -> np.ndarray:
        """(n_elements, dimension + 1, dimension) gradients of the local hats.

        On each element the P1 hat function of local vertex v has a constant
        gradient; contracting these with nodal values gives the element-wise
        gradient of the interpolant.
        """
        coords = self.vertices[self.elements]  # (n_e, d+1, d)
        if self.dimension == 1:
            h = coords[:, 1, 0] - coords[:, 0, 0]
            grads = np.empty((self.n_elements, 2, 1))
            grads[:, 0, 0] = -1.0 / h
            grads[:, 1, 0] = 1.0 / h
            return grads
        # 2-D: physical gradient = T^{-T} @ reference gradient
        t = np.stack(
            [coords[:, 1] - coords[:, 0], coords[:, 2] - coords[:, 0]], axis=-1
        )  # (n_e, 2, 2), columns are edge vectors
        tinv = np.linalg.inv(t)
        ref = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
        return np.einsum("vr,erd->evd", ref, tinv)


def build_interval_mesh(n: int, a_end: float, b_end: float) -> Mesh:
    """Uniform mesh of n segments on (a_end, b_end); endpoints are boundary."""
    if n < 2:
        raise ShapeError(f"interval mesh needs at least 2 elements, got {n}")
    if not a_end < b_end:
        raise ShapeError(f"degenerate interval ({a_end}, {b_end})")
    x = np.linspace(a_end, b_end, n + 1)
    vertices = x[:, None]
    elements = np.column_stack([np.arange(n), np.arange(1, n + 1)])
    mask = np.zeros(n + 1, dtype=bool)
    mask[0] = mask[-1] = True
    measures = np.diff(x)
    return Mesh(1, vertices, elements, mask, measures)


def build_rect_mesh(nx: int, ny: int, rect) -> Mesh:
    """Criss-cross triangulation of a rectangle, nx by ny cells split in two.

    ``rect`` is a pair of opposite corner points ((x0, y0), (x1, y1)); all
    four sides are flagged as Dirichlet boundary.
    """
    if nx < 2 or ny < 2:
        raise ShapeError(f"rect mesh needs at least 2x2 cells, got {nx}x{ny}")
    (x0, y0), (x1, y1) = rect
    if not (x0 < x1 and y0 < y1):
        raise ShapeError(f"degenerate rectangle {rect}")
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    xx, yy = np.meshgrid(xs, ys)  # row-major in y
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    def vid(i, j):
        return j * (nx + 1) + i

    tris = []
    for j in range(ny):
        for i in range(nx):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    elements = np.array(tris, dtype=int)

    ii, jj = np.meshgrid(np.arange(nx + 1), np.arange(ny + 1))
    mask = ((ii == 0) | (ii == nx) | (jj == 0) | (jj == ny)).ravel()

    coords = vertices[elements]
    e1 = coords[:, 1] - coords[:, 0]
    e2 = coords[:, 2] - coords[:, 0]
    measures = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    return Mesh(2, vertices, elements, mask, measures)


@dataclass(eq=False)
class GridFunction:
    """Nodal P1 function with zero trace on the flagged boundary.

    Constructors zero out flagged vertices rather than erroring, so random
    nodal data can be wrapped directly.
    """

    mesh: Mesh
    nodal_values: np.ndarray

    def __post_init__(self):
        values = np.array(self.nodal_values, dtype=float)
        if values.shape != (self.mesh.n_vertices,):
            raise ShapeError(
                f"expected {self.mesh.n_vertices} nodal values, got {values.shape}"
            )
        values[self.mesh.boundary_mask] = 0.0
        self.nodal_values = values

    def copy(self) -> "GridFunction":
        return GridFunction(self.mesh, self.nodal_values.copy())

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.mesh, -self.nodal_values)


def element_gradients(mesh: Mesh, values: np.ndarray) -> np.ndarray:
    """Per-element gradient of the P1 interpolant of raw nodal data.

    The boundary mask is ignored; exact for nodal samples of any affine
    function.  Returns an (n_elements, dimension) array.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (mesh.n_vertices,):
        raise ShapeError(
            f"expected {mesh.n_vertices} nodal values, got {values.shape}"
        )
    return np.einsum("evd,ev->ed", mesh.hat_gradients, values[mesh.elements])


def gradient_of(u: GridFunction) -> np.ndarray:
    """Piecewise-constant gradient of a grid function, one row per element."""
    return element_gradients(u.mesh, u.nodal_values)


def centroid_values(u: GridFunction) -> np.ndarray:
    """P1 interpolant evaluated at element centroids."""
    return u.nodal_values[u.mesh.elements].mean(axis=1)


def integrate(f, mesh: Mesh) -> float:
    """Midpoint quadrature: sum of per-element values times element measures."""
    f = np.asarray(f, dtype=float)
    if f.shape != (mesh.n_elements,):
        raise ShapeError(f"expected {mesh.n_elements} element values, got {f.shape}")
    return float(np.dot(f, mesh.element_measures))


def require_zero_trace(u: GridFunction, what: str = "grid function"):
    """Raise DomainError unless u vanishes on the flagged boundary."""
    if np.any(u.nodal_values[u.mesh.boundary_mask] != 0.0):
        raise DomainError(f"{what} must have zero boundary trace")
