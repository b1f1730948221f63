"""Initial curves, sampled at the uniform parameter values xi_j = 2*pi*j/N."""

from __future__ import annotations

import enum

import numpy as np

from .errors import InvalidN
from .geometry import GridCurve, make_curve


class CurveKind(enum.Enum):
    ELLIPSE = "ellipse"
    FOUR_LEAF_ROSE = "rose"
    FLOWER = "flower"
    RECTANGLE_4X1 = "rect"


def _rectangle_point(s: float) -> tuple[float, float]:
    """Point at arclength s along the 4x1 rectangle, CCW from (0, 0)."""
    if s < 4.0:
        return (s, 0.0)
    if s < 5.0:
        return (4.0, s - 4.0)
    if s < 9.0:
        return (9.0 - s, 1.0)
    return (0.0, 10.0 - s)


def sample_curve(kind: CurveKind, n: int) -> GridCurve:
    """Sample an initial curve with n nodes.

    Analytic kinds place vertex j at the curve point with parameter
    2*pi*j/n.  The rectangle is sampled at equal arclength from corner
    (0, 0) traversed CCW; when n is a multiple of 10 all four corners
    coincide with nodes and the polygon is the exact rectangle.
    """
    if n < 3:
        raise InvalidN(f"need at least 3 nodes, got {n}")
    theta = 2.0 * np.pi * np.arange(n) / n
    if kind is CurveKind.ELLIPSE:
        pts = np.column_stack((2.0 * np.cos(theta), np.sin(theta)))
    elif kind is CurveKind.FOUR_LEAF_ROSE:
        r = np.cos(2.0 * theta)
        pts = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    elif kind is CurveKind.FLOWER:
        r = 2.0 + np.cos(6.0 * theta)
        pts = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    elif kind is CurveKind.RECTANGLE_4X1:
        if n < 8:
            raise InvalidN(f"rectangle sampling needs at least 8 nodes, got {n}")
        pts = np.array([_rectangle_point(10.0 * j / n) for j in range(n)])
    else:
        raise InvalidN(f"unknown curve kind {kind!r}")
    return make_curve(pts)
