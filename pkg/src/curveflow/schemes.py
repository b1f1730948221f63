"""Semi-discrete velocities and fully discrete steps of the three schemes.

All three schemes advance a closed polygon by one backward-Euler step of
size tau; every geometric coefficient is frozen at the previous level,
so each step solves one linear cyclic (block) tridiagonal system.

Naming below: q[j] and t[j] are the length and unit tangent of the edge
from vertex j-1 to vertex j, n[j] = perp(t[j]) its normal, lh the
polygon perimeter and f = f(lh) the forcing value.  qn, tn denote the
arrays rolled so index j holds the j+1 entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclic import (
    BlockCyclicTridiag,
    CyclicTridiag,
    block_cyclic_matvec,
    cyclic_matvec,
    solve_block_cyclic_tridiag,
    solve_cyclic_tridiag,
)
from .errors import MeshDegenerate
from .forcing import ForceSpec, force
from .geometry import (
    GridCurve,
    averaged_tangents,
    edge_lengths,
    edge_tangents,
    make_curve,
    perp,
)

# An edge at or below this fraction of the perimeter means the step
# destroyed the mesh.
DEGENERATE_EDGE_RTOL = 1e-12


@dataclass(frozen=True)
class TangentialParams:
    """DeTurck reparametrization strength; alpha = 1 is plain normal motion."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class StepReport:
    curve_next: GridCurve
    min_edge: float
    solver_residual: float


def _finish_step(vertices: np.ndarray, residual: float) -> StepReport:
    q = np.linalg.norm(vertices - np.roll(vertices, 1, axis=0), axis=1)
    min_edge = float(q.min())
    if min_edge <= DEGENERATE_EDGE_RTOL * float(q.sum()):
        raise MeshDegenerate(
            f"edge collapsed to {min_edge:.3e} (perimeter {q.sum():.3e})"
        )
    return StepReport(make_curve(vertices), min_edge, residual)


# ---------------------------------------------------------------------------
# Finite difference scheme


def fdm_velocity(curve: GridCurve, spec: ForceSpec) -> np.ndarray:
    """Right-hand side of the finite difference vertex ODEs."""
    q = edge_lengths(curve)
    t = edge_tangents(curve)
    f = force(spec, float(q.sum()))
    c = 2.0 / (q + np.roll(q, -1))
    return c[:, None] * (np.roll(t, -1, axis=0) - t) - f * perp(averaged_tangents(curve))


def fdm_step(curve: GridCurve, tau: float, spec: ForceSpec) -> StepReport:
    """One backward-Euler step of the finite difference scheme.

    The implicit operator is scalar, so the two coordinates decouple into
    two cyclic tridiagonal solves sharing one matrix; the forcing term is
    fully explicit.
    """
    if tau <= 0.0:
        raise ValueError(f"time step must be positive, got {tau}")
    q = edge_lengths(curve)
    qn = np.roll(q, -1)
    f = force(spec, float(q.sum()))
    nu = perp(averaged_tangents(curve))  # averaged vertex normal

    c = 2.0 / (q + qn)
    system = CyclicTridiag(
        sub=-c / q,
        diag=1.0 / tau + c * (1.0 / q + 1.0 / qn),
        sup=-c / qn,
    )
    rhs = curve.vertices / tau - f * nu
    x = solve_cyclic_tridiag(system, rhs)
    residual = float(np.max(np.abs(cyclic_matvec(system, x) - rhs)))
    return _finish_step(x, residual)


# ---------------------------------------------------------------------------
# Mass-lumped finite element scheme


def fem_velocity(curve: GridCurve, spec: ForceSpec) -> np.ndarray:
    """Right-hand side of the mass-lumped finite element vertex ODEs.

    The forcing enters through the hat-function quadrature weight of the
    two incident edges, hence the half on the centered difference.
    """
    q = edge_lengths(curve)
    t = edge_tangents(curve)
    f = force(spec, float(q.sum()))
    v = curve.vertices
    centered = np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)
    c = 2.0 / (q + np.roll(q, -1))
    return c[:, None] * (np.roll(t, -1, axis=0) - t - 0.5 * f * perp(centered))


def fem_normal_forcing(curve: GridCurve, spec: ForceSpec) -> np.ndarray:
    """The edge-weighted normal forcing r[j] at each vertex.

    r[j] = -f(lh) * (n_j q_j + n_{j+1} q_{j+1}) / (q_j + q_{j+1}); the
    vertex velocity splits as the discrete curvature part plus r.
    """
    q = edge_lengths(curve)
    n = perp(edge_tangents(curve))
    f = force(spec, float(q.sum()))
    qn = np.roll(q, -1)
    return -f * (n * q[:, None] + np.roll(n, -1, axis=0) * qn[:, None]) / (q + qn)[:, None]


def fem_step(curve: GridCurve, tau: float, spec: ForceSpec) -> StepReport:
    """One backward-Euler step of the mass-lumped finite element scheme.

    The implicit centered-difference forcing couples the coordinates, so
    the step solves one 2x2-block cyclic tridiagonal system.
    """
    if tau <= 0.0:
        raise ValueError(f"time step must be positive, got {tau}")
    q = edge_lengths(curve)
    qn = np.roll(q, -1)
    f = force(spec, float(q.sum()))

    eye = np.eye(2)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])  # matrix of perp
    diag = ((q + qn) / (2.0 * tau) + 1.0 / q + 1.0 / qn)[:, None, None] * eye
    sup = (-1.0 / qn)[:, None, None] * eye + (0.5 * f) * rot
    sub = (-1.0 / q)[:, None, None] * eye - (0.5 * f) * rot
    system = BlockCyclicTridiag(sub=sub, diag=diag, sup=sup)

    rhs = ((q + qn) / (2.0 * tau))[:, None] * curve.vertices
    x = solve_block_cyclic_tridiag(system, rhs)
    residual = float(np.max(np.abs(block_cyclic_matvec(system, x) - rhs)))
    return _finish_step(x, residual)


# ---------------------------------------------------------------------------
# Finite element scheme with tangential motion


def fem_tm_normals(curve: GridCurve) -> np.ndarray:
    """Unit vertex normal used by the tangential-motion scheme.

    The piecewise edge normal is discontinuous at the vertices; its node
    value is taken as the unit bisector of the two one-sided limits.  A
    one-sided choice costs an O(h) asymmetry that the projection turns
    into a normal (shape) error, visibly degrading manifold-distance
    convergence for alpha < 1.
    """
    return perp(averaged_tangents(curve))


def fem_tm_velocity(
    curve: GridCurve, spec: ForceSpec, params: TangentialParams
) -> np.ndarray:
    """Right-hand side of the tangential-motion vertex ODEs.

    Solves M_j v_j = g_j with M_j = alpha*I + (1-alpha) n_j n_j^T and
    g_j the scaled second difference minus the normal forcing; M only
    rescales the tangential component, so the inverse is applied in
    closed form.
    """
    alpha = params.alpha
    q = edge_lengths(curve)
    n = fem_tm_normals(curve)
    f = force(spec, float(q.sum()))
    v = curve.vertices
    second = np.roll(v, -1, axis=0) - 2.0 * v + np.roll(v, 1, axis=0)
    denom = q**2 + np.roll(q, -1) ** 2
    g = 2.0 * second / denom[:, None] - f * n
    ng = np.sum(n * g, axis=1)
    return g / alpha + (1.0 - 1.0 / alpha) * ng[:, None] * n


def fem_tm_step(
    curve: GridCurve, tau: float, spec: ForceSpec, params: TangentialParams
) -> StepReport:
    """One backward-Euler step of the tangential-motion scheme."""
    if tau <= 0.0:
        raise ValueError(f"time step must be positive, got {tau}")
    alpha = params.alpha
    q = edge_lengths(curve)
    n = fem_tm_normals(curve)
    f = force(spec, float(q.sum()))
    denom = q**2 + np.roll(q, -1) ** 2

    eye = np.eye(2)
    nnt = n[:, :, None] * n[:, None, :]
    m = alpha * eye + (1.0 - alpha) * nnt
    diag = m / tau + (4.0 / denom)[:, None, None] * eye
    off = (-2.0 / denom)[:, None, None] * eye
    system = BlockCyclicTridiag(sub=off, diag=diag, sup=off)

    rhs = np.einsum("jab,jb->ja", m, curve.vertices) / tau - f * n
    x = solve_block_cyclic_tridiag(system, rhs)
    residual = float(np.max(np.abs(block_cyclic_matvec(system, x) - rhs)))
    return _finish_step(x, residual)
