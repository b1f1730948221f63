"""Discrete geometry of closed polygonal curves on a uniform parameter grid.

A curve is its N ordered vertices; vertex j sits at parameter
xi_j = 2*pi*j/N and indexing is periodic.  Edge j runs from vertex j-1 to
vertex j, so q[j] and the edge tangent t[j] describe the edge *into*
vertex j.  All derived quantities are recomputed on demand; nothing is
cached, so nothing can go stale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CuspError, InvalidCurve

# Below this, the bisector of adjacent edge tangents is treated as
# undefined (degenerate spike); far smaller than any resolvable geometry.
EPS_CUSP = 1e-10


@dataclass(frozen=True)
class GridCurve:
    """Closed polygon over the periodic uniform grid xi_j = 2*pi*j/N."""

    vertices: np.ndarray  # (N, 2) float64, read-only

    @property
    def n_segments(self) -> int:
        return self.vertices.shape[0]

    @property
    def param_step(self) -> float:
        """Parameter grid spacing h = 2*pi/N."""
        return 2.0 * np.pi / self.vertices.shape[0]


def make_curve(vertices) -> GridCurve:
    """Validate vertex data and build an immutable GridCurve.

    Raises InvalidCurve for fewer than 3 vertices, non-finite
    coordinates, or a zero-length edge.
    """
    v = np.array(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2:
        raise InvalidCurve(f"expected an (N, 2) vertex array, got shape {v.shape}")
    if v.shape[0] < 3:
        raise InvalidCurve(f"need at least 3 vertices, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise InvalidCurve("vertex coordinates must be finite")
    q = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1)
    if np.any(q == 0.0):
        raise InvalidCurve(f"zero-length edge at index {int(np.argmin(q))}")
    v.setflags(write=False)
    return GridCurve(v)


def perp(v: np.ndarray) -> np.ndarray:
    """Rotate by +pi/2: (a, b) -> (-b, a).  Works on (..., 2) arrays."""
    v = np.asarray(v, dtype=float)
    return np.stack((-v[..., 1], v[..., 0]), axis=-1)


def edge_lengths(curve: GridCurve) -> np.ndarray:
    """q[j] = |x_j - x_{j-1}|, periodic."""
    v = curve.vertices
    return np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1)


def edge_tangents(curve: GridCurve) -> np.ndarray:
    """Unit tangent of edge j: (x_j - x_{j-1}) / q_j."""
    v = curve.vertices
    d = v - np.roll(v, 1, axis=0)
    return d / np.linalg.norm(d, axis=1)[:, None]


def averaged_tangents(curve: GridCurve) -> np.ndarray:
    """Unit bisector of the edge tangents meeting at each vertex.

    Entry j bisects the tangents of edges j and j+1 (the vertex tangent
    at vertex j).  Raises CuspError when adjacent edges are antiparallel
    to within EPS_CUSP.
    """
    t = edge_tangents(curve)
    s = t + np.roll(t, -1, axis=0)
    norms = np.linalg.norm(s, axis=1)
    if np.any(norms <= EPS_CUSP):
        j = int(np.argmin(norms))
        raise CuspError(f"antiparallel adjacent edges at vertex {j}")
    return s / norms[:, None]


def averaged_tangent(curve: GridCurve, j: int) -> np.ndarray:
    """Vertex tangent at a single vertex j (periodic index)."""
    t = edge_tangents(curve)
    n = curve.n_segments
    s = t[j % n] + t[(j + 1) % n]
    norm = float(np.linalg.norm(s))
    if norm <= EPS_CUSP:
        raise CuspError(f"antiparallel adjacent edges at vertex {j % n}")
    return s / norm


def perimeter(curve: GridCurve) -> float:
    """Total edge length of the polygon."""
    return float(edge_lengths(curve).sum())


def signed_area(curve: GridCurve) -> float:
    """Shoelace area, positive for CCW simple polygons.

    For self-intersecting curves this is the winding-number-weighted
    area.  Vertices are anchored at vertex 0 before summing so large
    translations do not degrade the result.
    """
    v = curve.vertices - curve.vertices[0]
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def mesh_ratio(curve: GridCurve) -> float:
    """Longest edge over shortest edge; 1 means equidistributed nodes."""
    q = edge_lengths(curve)
    return float(q.max() / q.min())
