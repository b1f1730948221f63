"""Cyclic tridiagonal and 2x2-block cyclic tridiagonal solvers.

One implicit time step of each scheme produces a tridiagonal system with
periodic wrap-around corner entries.  The corners are removed by a
rank-1 (scalar) / rank-2 (block) Woodbury correction and the remaining
banded system is eliminated in O(N); the banded sweep is delegated to
LAPACK via scipy.linalg.solve_banded.

Row j of the scalar system reads

    sub[j] * x[j-1] + diag[j] * x[j] + sup[j] * x[j+1] = rhs[j]

with periodic indices, so sub[0] couples to x[N-1] and sup[N-1] to x[0].
The block form is identical with 2x2 blocks acting on 2-vectors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import DominanceWarning, SingularSystem

# Accepted relative residual of a solve; beyond this the system is
# reported as singular rather than returning garbage.
RESIDUAL_RTOL = 1e-10
PIVOT_RTOL = 1e-13


@dataclass(frozen=True)
class CyclicTridiag:
    sub: np.ndarray  # (N,) coefficient of x_{j-1}
    diag: np.ndarray  # (N,)
    sup: np.ndarray  # (N,) coefficient of x_{j+1}

    def __post_init__(self):
        n = len(self.diag)
        if n < 3 or len(self.sub) != n or len(self.sup) != n:
            raise ValueError("sub, diag, sup must share a length N >= 3")


@dataclass(frozen=True)
class BlockCyclicTridiag:
    sub: np.ndarray  # (N, 2, 2)
    diag: np.ndarray  # (N, 2, 2)
    sup: np.ndarray  # (N, 2, 2)

    def __post_init__(self):
        n = self.diag.shape[0]
        ok = (
            n >= 3
            and self.sub.shape == (n, 2, 2)
            and self.diag.shape == (n, 2, 2)
            and self.sup.shape == (n, 2, 2)
        )
        if not ok:
            raise ValueError("blocks must be (N, 2, 2) arrays with N >= 3")


def cyclic_matvec(a: CyclicTridiag, x: np.ndarray) -> np.ndarray:
    """A @ x for a cyclic tridiagonal A; x may be (N,) or (N, k)."""
    xm = np.roll(x, 1, axis=0)
    xp = np.roll(x, -1, axis=0)
    if x.ndim == 1:
        return a.sub * xm + a.diag * x + a.sup * xp
    return a.sub[:, None] * xm + a.diag[:, None] * x + a.sup[:, None] * xp


def block_cyclic_matvec(a: BlockCyclicTridiag, x: np.ndarray) -> np.ndarray:
    """A @ x for a block cyclic tridiagonal A; x is (N, 2)."""
    xm = np.roll(x, 1, axis=0)
    xp = np.roll(x, -1, axis=0)
    return (
        np.einsum("jab,jb->ja", a.sub, xm)
        + np.einsum("jab,jb->ja", a.diag, x)
        + np.einsum("jab,jb->ja", a.sup, xp)
    )


def _warn_if_not_dominant(row_off: np.ndarray, row_diag: np.ndarray):
    if np.any(np.abs(row_diag) < row_off):
        warnings.warn(
            "cyclic system is not strictly diagonally dominant",
            DominanceWarning,
            stacklevel=3,
        )


def _check_residual(resid: float, scale: float):
    if not np.isfinite(resid) or resid > RESIDUAL_RTOL * scale:
        raise SingularSystem(
            f"solution residual {resid:.3e} exceeds {RESIDUAL_RTOL:.0e} * {scale:.3e}"
        )


def solve_cyclic_tridiag(a: CyclicTridiag, rhs: np.ndarray) -> np.ndarray:
    """Solve the cyclic tridiagonal system A x = rhs.

    rhs may be (N,) or (N, k) for k simultaneous right-hand sides.
    Raises SingularSystem when the system cannot be solved to the
    documented residual bound.
    """
    sub = np.asarray(a.sub, dtype=float)
    diag = np.asarray(a.diag, dtype=float)
    sup = np.asarray(a.sup, dtype=float)
    n = len(diag)
    rhs = np.asarray(rhs, dtype=float)
    squeeze = rhs.ndim == 1
    b = rhs[:, None] if squeeze else rhs
    if b.shape[0] != n:
        raise ValueError(f"rhs length {b.shape[0]} does not match N = {n}")

    _warn_if_not_dominant(np.abs(sub) + np.abs(sup), diag)

    # Corner entries: alpha = A[0, N-1], beta = A[N-1, 0].
    alpha = sub[0]
    beta = sup[n - 1]
    row_scale = np.abs(sub) + np.abs(diag) + np.abs(sup)
    # Any nonzero gamma works; -diag[0] keeps the corrected diagonal well
    # scaled, with a fallback when diag[0] itself is negligible.
    gamma = -diag[0]
    if np.abs(gamma) <= PIVOT_RTOL * max(row_scale[0], 1.0):
        gamma = max(row_scale[0], 1.0)

    d = diag.copy()
    d[0] -= gamma
    d[n - 1] -= alpha * beta / gamma

    # LAPACK band storage: row 0 superdiagonal, row 1 diagonal, row 2 sub.
    ab = np.zeros((3, n))
    ab[0, 1:] = sup[:-1]
    ab[1, :] = d
    ab[2, :-1] = sub[1:]

    u = np.zeros((n, 1))
    u[0, 0] = gamma
    u[n - 1, 0] = beta

    try:
        sol = solve_banded((1, 1), ab, np.hstack((b, u)))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    y, z = sol[:, :-1], sol[:, -1]

    vy = y[0] + (alpha / gamma) * y[n - 1]  # v^T y, one entry per rhs column
    vz = z[0] + (alpha / gamma) * z[n - 1]
    denom = 1.0 + vz
    if not np.isfinite(denom) or abs(denom) <= PIVOT_RTOL:
        raise SingularSystem("singular Woodbury capacitance")
    x = y - np.outer(z, vy / denom)

    resid = float(np.max(np.abs(cyclic_matvec(a, x) - b)))
    scale = float(np.max(row_scale) * np.max(np.abs(x)) + np.max(np.abs(b)))
    _check_residual(resid, scale)
    return x[:, 0] if squeeze else x


def _band_from_blocks(sub, diag, sup, n):
    """Pack the acyclic block tridiagonal part into LAPACK band storage."""
    ab = np.zeros((7, 2 * n))  # bandwidth (3, 3)
    j = np.arange(n)
    for r in range(2):
        for c in range(2):
            ab[3 + r - c, 2 * j + c] = diag[:, r, c]
            ab[5 + r - c, 2 * j[:-1] + c] = sub[1:, r, c]
            ab[1 + r - c, 2 * j[1:] + c] = sup[:-1, r, c]
    return ab


def solve_block_cyclic_tridiag(a: BlockCyclicTridiag, rhs: np.ndarray) -> np.ndarray:
    """Solve the 2x2-block cyclic tridiagonal system; rhs is (N, 2)."""
    sub = np.asarray(a.sub, dtype=float)
    diag = np.asarray(a.diag, dtype=float)
    sup = np.asarray(a.sup, dtype=float)
    n = diag.shape[0]
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (n, 2):
        raise ValueError(f"rhs must be (N, 2), got {rhs.shape}")

    off = np.abs(sub).sum(axis=(1, 2)) + np.abs(sup).sum(axis=(1, 2))
    _warn_if_not_dominant(off, np.abs(diag).sum(axis=(1, 2)))

    # Corner blocks: A[0, N-1] = sub[0], A[N-1, 0] = sup[N-1].  Remove
    # them with A = B + U V^T where U stacks blocks (Gamma, 0, ..., W)
    # and V^T stacks (I, 0, ..., P); Gamma = -diag[0], W = sup[N-1],
    # P = Gamma^{-1} sub[0].
    gamma = -diag[0]
    gscale = max(float(np.abs(gamma).max()), 1.0)
    if abs(float(np.linalg.det(gamma))) <= PIVOT_RTOL * gscale**2:
        gamma = np.eye(2)
    p_last = np.linalg.solve(gamma, sub[0])

    d = diag.copy()
    d[0] = d[0] - gamma
    d[n - 1] = d[n - 1] - sup[n - 1] @ p_last

    ab = _band_from_blocks(sub, d, sup, n)

    cols = np.zeros((2 * n, 3))
    cols[:, 0] = rhs.reshape(-1)
    cols[0:2, 1:3] = gamma
    cols[2 * n - 2 :, 1:3] = sup[n - 1]

    try:
        sol = solve_banded((3, 3), ab, cols)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc

    y = sol[:, 0].reshape(n, 2)
    z = sol[:, 1:].reshape(n, 2, 2)

    # Capacitance H = I + V^T B^{-1} U with V^T picking rows 0 and N-1.
    vy = y[0] + p_last @ y[n - 1]
    vz = z[0] + p_last @ z[n - 1]
    h = np.eye(2) + vz
    hscale = max(float(np.abs(h).max()), 1.0)
    if abs(float(np.linalg.det(h))) <= PIVOT_RTOL * hscale**2:
        raise SingularSystem("singular Woodbury capacitance block")
    w = np.linalg.solve(h, vy)
    x = y - z @ w

    resid = float(np.max(np.abs(block_cyclic_matvec(a, x) - rhs)))
    row_scale = (np.abs(sub) + np.abs(diag) + np.abs(sup)).sum(axis=(1, 2))
    scale = float(np.max(row_scale) * np.max(np.abs(x)) + np.max(np.abs(rhs)))
    _check_residual(resid, scale)
    return x
