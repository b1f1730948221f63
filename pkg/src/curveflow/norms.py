"""Grid norms, nested-grid restriction, and piecewise-linear error norms.

Grid functions live on the uniform periodic grid xi_j = 2*pi*j/N with
spacing h = 2*pi/N; values may be scalars (N,) or plane vectors (N, 2).
The continuous norms integrate piecewise-linear interpolants exactly
(the integrands are piecewise polynomials), so no quadrature error
enters measured convergence orders.
"""

from __future__ import annotations

import numpy as np

from .errors import SizeMismatch
from .geometry import GridCurve


def _abs2(u: np.ndarray) -> np.ndarray:
    """Squared magnitude per grid node for (N,) or (N, k) values."""
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        return u * u
    return np.sum(u * u, axis=-1)


def grid_l2(u: np.ndarray) -> float:
    """(h * sum |u_j|^2)^(1/2) with h = 2*pi/N."""
    u = np.asarray(u, dtype=float)
    h = 2.0 * np.pi / u.shape[0]
    return float(np.sqrt(h * _abs2(u).sum()))


def grid_h1(u: np.ndarray) -> float:
    """(h * sum(|u_j|^2 + |du_j|^2))^(1/2), du_j = (u_j - u_{j-1})/h."""
    u = np.asarray(u, dtype=float)
    h = 2.0 * np.pi / u.shape[0]
    du = (u - np.roll(u, 1, axis=0)) / h
    return float(np.sqrt(h * (_abs2(u).sum() + _abs2(du).sum())))


def grid_linf(u: np.ndarray) -> float:
    """max_j |u_j|."""
    return float(np.sqrt(_abs2(u).max()))


def restrict_fine(fine: GridCurve) -> np.ndarray:
    """Values of a 2N-vertex curve at the coarse N-node grid (even nodes)."""
    if fine.n_segments % 2 != 0:
        raise SizeMismatch(
            f"fine curve must have an even vertex count, got {fine.n_segments}"
        )
    return fine.vertices[::2]


def _check_nested(coarse: GridCurve, fine: GridCurve) -> int:
    n = coarse.n_segments
    if fine.n_segments != 2 * n:
        raise SizeMismatch(
            f"fine curve must have 2N = {2 * n} vertices, got {fine.n_segments}"
        )
    return n


def pl_l2_diff(coarse: GridCurve, fine: GridCurve) -> float:
    """Exact L2 norm of the difference of the two piecewise-linear interpolants.

    Both interpolants are linear on each fine subinterval, so the squared
    difference is quadratic there and Simpson's rule is exact.
    """
    n = _check_nested(coarse, fine)
    hf = 2.0 * np.pi / (2 * n)
    cv = coarse.vertices
    # Coarse interpolant at the fine nodes: nodes at even indices, chord
    # midpoints at odd indices.
    c_at_fine = np.empty((2 * n, 2))
    c_at_fine[::2] = cv
    c_at_fine[1::2] = 0.5 * (cv + np.roll(cv, -1, axis=0))
    d = c_at_fine - fine.vertices
    dn = np.roll(d, -1, axis=0)
    mid = 0.5 * (d + dn)
    integral = (hf / 6.0) * np.sum(_abs2(d) + 4.0 * _abs2(mid) + _abs2(dn))
    return float(np.sqrt(integral))


def pl_h1_diff(coarse: GridCurve, fine: GridCurve) -> float:
    """pl_l2_diff plus the exact L2 norm of the derivative difference.

    The parameter derivatives of both interpolants are constant on each
    fine subinterval, so the derivative term is an exact sum.
    """
    n = _check_nested(coarse, fine)
    hf = 2.0 * np.pi / (2 * n)
    hc = 2.0 * hf
    cv = coarse.vertices
    fv = fine.vertices
    dc = (np.roll(cv, -1, axis=0) - cv) / hc  # coarse slope per coarse interval
    dc_fine = np.repeat(dc, 2, axis=0)
    df = (np.roll(fv, -1, axis=0) - fv) / hf
    deriv_l2 = np.sqrt(hf * np.sum(_abs2(dc_fine - df)))
    return pl_l2_diff(coarse, fine) + float(deriv_l2)


def h1g_bound_check(g: np.ndarray) -> tuple[float, float]:
    """Both sides of the interpolant bound |g|_{H1}^2 <= |g|_{H1_G}^2 (1 + h^2/6).

    Returns (lhs, rhs) where lhs is the exact squared H1 norm of the
    periodic piecewise-linear interpolant of the scalar grid function g.
    """
    g = np.asarray(g, dtype=float)
    h = 2.0 * np.pi / g.shape[0]
    gn = np.roll(g, -1)
    # Exact integrals on each interval: int g^2 = (h/3)(g_j^2 + g_j g_{j+1}
    # + g_{j+1}^2), int (g')^2 = (g_{j+1} - g_j)^2 / h.
    lhs = float(np.sum((h / 3.0) * (g * g + g * gn + gn * gn) + (gn - g) ** 2 / h))
    dg = (g - np.roll(g, 1)) / h
    rhs = float(h * np.sum(g * g + dg * dg) * (1.0 + h * h / 6.0))
    return lhs, rhs
