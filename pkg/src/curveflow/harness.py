"""Experiment drivers: evolutions and self-refinement convergence studies.

An evolution run records perimeter, signed area, relative area loss and
mesh ratio at every time level.  A convergence study compares each
resolution (N, tau) against the same scheme at (2N, tau/4) -- level k
against level 4k -- and reports errors with experimental orders of
convergence between consecutive rows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import CurveKind, sample_curve
from .errors import CurveFlowError, EvolutionAborted, NonpositiveError
from .forcing import ForceSpec
from .geometry import GridCurve, mesh_ratio, perimeter, signed_area
from .manifold import manifold_distance
from .norms import grid_h1, grid_l2, grid_linf, pl_h1_diff, restrict_fine
from .schemes import TangentialParams, fdm_step, fem_step, fem_tm_step


class Scheme(enum.Enum):
    FDM = "fdm"
    FEM = "fem"
    FEM_TM = "fem-tm"


# Error names produced per scheme; E1 variants share the refinement pair.
FDM_ERROR_NAMES = ("E1", "E1_L2", "E1_Linf", "E2")
FEM_ERROR_NAMES = ("E3", "E4")


def default_tau_rule(n: int) -> float:
    """Nominal accuracy-run time step tau = 0.5 h^2."""
    return 0.5 * (2.0 * np.pi / n) ** 2


@dataclass(frozen=True)
class SchemeConfig:
    scheme: Scheme
    kind: CurveKind
    force: ForceSpec
    n: int
    tau: float
    t_final: float
    alpha: float | None = None
    snapshot_times: tuple[float, ...] = ()

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        if self.tau <= 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.t_final <= 0.0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        steps = self.t_final / self.tau
        if abs(steps - round(steps)) > 4.0 * np.spacing(max(steps, 1.0)) or round(steps) < 1:
            raise ValueError("t_final must be an integer multiple of tau")
        if self.scheme is Scheme.FEM_TM:
            if self.alpha is None or not 0.0 < self.alpha <= 1.0:
                raise ValueError("fem-tm requires alpha in (0, 1]")
        elif self.alpha is not None:
            raise ValueError("alpha is only meaningful for fem-tm")

    @property
    def num_steps(self) -> int:
        return int(round(self.t_final / self.tau))


@dataclass
class EvolutionRecord:
    times: np.ndarray
    perimeter: np.ndarray
    area: np.ndarray
    rel_area_loss: np.ndarray
    mesh_ratio: np.ndarray
    snapshots: list[tuple[float, GridCurve]] = field(default_factory=list)


def _stepper(scheme: Scheme, force_spec: ForceSpec, alpha: float | None):
    if scheme is Scheme.FDM:
        return lambda curve, tau: fdm_step(curve, tau, force_spec)
    if scheme is Scheme.FEM:
        return lambda curve, tau: fem_step(curve, tau, force_spec)
    params = TangentialParams(1.0 if alpha is None else alpha)
    return lambda curve, tau: fem_tm_step(curve, tau, force_spec, params)


def evolve_curves(
    scheme: Scheme,
    curve0: GridCurve,
    tau: float,
    num_steps: int,
    force_spec: ForceSpec,
    alpha: float | None = None,
) -> list[GridCurve]:
    """All time levels 0..num_steps of one trajectory.

    Raises EvolutionAborted (carrying the levels computed so far) when a
    step fails.
    """
    step = _stepper(scheme, force_spec, alpha)
    curves = [curve0]
    for k in range(1, num_steps + 1):
        try:
            curves.append(step(curves[-1], tau).curve_next)
        except CurveFlowError as exc:
            raise EvolutionAborted(k, k * tau, exc, curves=curves) from exc
    return curves


def _build_record(curves: list[GridCurve], tau: float, snapshot_times) -> EvolutionRecord:
    times = tau * np.arange(len(curves))
    per = np.array([perimeter(c) for c in curves])
    area = np.array([signed_area(c) for c in curves])
    psi = np.array([mesh_ratio(c) for c in curves])
    rel = (area - area[0]) / area[0] if area[0] != 0.0 else np.full_like(area, np.nan)
    snaps = []
    for t in snapshot_times:
        k = int(round(t / tau))
        if 0 <= k < len(curves) and abs(k * tau - t) <= 0.5 * tau:
            snaps.append((float(times[k]), curves[k]))
    return EvolutionRecord(times, per, area, rel, psi, snaps)


def run_evolution(config: SchemeConfig) -> EvolutionRecord:
    """Run one evolution experiment from the sampled initial curve.

    On a mid-run failure the raised EvolutionAborted carries the partial
    record in its ``record`` attribute.
    """
    curve0 = sample_curve(config.kind, config.n)
    try:
        curves = evolve_curves(
            config.scheme, curve0, config.tau, config.num_steps, config.force, config.alpha
        )
    except EvolutionAborted as exc:
        exc.record = _build_record(exc.curves, config.tau, config.snapshot_times)
        raise
    return _build_record(curves, config.tau, config.snapshot_times)


# ---------------------------------------------------------------------------
# Convergence studies


def eoc(errors, ratio: float = 2.0) -> list[float]:
    """Orders log(e_i / e_{i+1}) / log(ratio) between consecutive errors."""
    if ratio <= 1.0:
        raise ValueError(f"refinement ratio must exceed 1, got {ratio}")
    values = [float(e) for e in errors]
    if any(e <= 0.0 for e in values):
        raise NonpositiveError("errors must be strictly positive to take orders")
    return [
        math.log(values[i] / values[i + 1]) / math.log(ratio)
        for i in range(len(values) - 1)
    ]


@dataclass
class ConvergenceRow:
    n: int
    h: float
    tau: float
    errors: dict[str, float]
    failure: str | None = None


@dataclass
class ConvergenceTable:
    scheme: Scheme
    kind: CurveKind
    rows: list[ConvergenceRow]
    eoc: dict[str, list[float]]

    @property
    def error_names(self) -> tuple[str, ...]:
        return FDM_ERROR_NAMES if self.scheme is Scheme.FDM else FEM_ERROR_NAMES

    def errors_of(self, name: str) -> list[float]:
        return [row.errors[name] for row in self.rows if name in row.errors]

    def last_eoc(self, name: str) -> float:
        orders = self.eoc[name]
        if not orders:
            raise NonpositiveError(f"no EOC available for {name}")
        return orders[-1]


def _fdm_row_errors(coarse: list[GridCurve], fine: list[GridCurve]) -> dict[str, float]:
    m = len(coarse) - 1
    e1 = e1_l2 = e1_linf = 0.0
    for k in range(1, m + 1):
        diff = coarse[k].vertices - restrict_fine(fine[4 * k])
        e1 = max(e1, grid_h1(diff))
        e1_l2 = max(e1_l2, grid_l2(diff))
        e1_linf = max(e1_linf, grid_linf(diff))
    e2 = manifold_distance(coarse[m], fine[4 * m])
    return {"E1": e1, "E1_L2": e1_l2, "E1_Linf": e1_linf, "E2": e2}


def _fem_row_errors(coarse: list[GridCurve], fine: list[GridCurve]) -> dict[str, float]:
    m = len(coarse) - 1
    e3 = max(pl_h1_diff(coarse[k], fine[4 * k]) for k in range(1, m + 1))
    e4 = manifold_distance(coarse[m], fine[4 * m])
    return {"E3": e3, "E4": e4}


def run_convergence(
    scheme: Scheme,
    kind: CurveKind,
    force_spec: ForceSpec,
    n_list,
    t_final: float,
    alpha: float | None = None,
    tau_rule=None,
) -> ConvergenceTable:
    """Self-refinement convergence study over a doubling ladder of N.

    The step count at the coarsest level is rounded to make tau divide
    t_final exactly and is then quadrupled per refinement, so tau
    quarters exactly as h halves.  The reference trajectory of each row
    is reused as the solution trajectory of the next.
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 1:
        raise ValueError("need at least one resolution")
    for a, b in zip(n_list[:-1], n_list[1:]):
        if b != 2 * a:
            raise ValueError(f"resolutions must double: {a} -> {b}")
    if tau_rule is None:
        tau_rule = default_tau_rule

    m0 = max(1, round(t_final / tau_rule(n_list[0])))
    ladder = n_list + [2 * n_list[-1]]
    trajectories: list[list[GridCurve] | None] = []
    failures: list[str | None] = []
    for i, n in enumerate(ladder):
        m = m0 * 4**i
        tau = t_final / m
        try:
            trajectories.append(
                evolve_curves(scheme, sample_curve(kind, n), tau, m, force_spec, alpha)
            )
            failures.append(None)
        except EvolutionAborted as exc:
            trajectories.append(None)
            failures.append(str(exc))

    rows = []
    for i, n in enumerate(n_list):
        tau = t_final / (m0 * 4**i)
        h = 2.0 * np.pi / n
        coarse, fine = trajectories[i], trajectories[i + 1]
        if coarse is None or fine is None:
            rows.append(ConvergenceRow(n, h, tau, {}, failures[i] or failures[i + 1]))
            continue
        if scheme is Scheme.FDM:
            errors = _fdm_row_errors(coarse, fine)
        else:
            errors = _fem_row_errors(coarse, fine)
        rows.append(ConvergenceRow(n, h, tau, errors))

    names = FDM_ERROR_NAMES if scheme is Scheme.FDM else FEM_ERROR_NAMES
    orders: dict[str, list[float]] = {name: [] for name in names}
    for name in names:
        for lo, hi in zip(rows[:-1], rows[1:]):
            if name in lo.errors and name in hi.errors:
                orders[name].extend(eoc([lo.errors[name], hi.errors[name]], 2.0))
            else:
                orders[name].append(float("nan"))
    return ConvergenceTable(scheme, kind, rows, orders)
