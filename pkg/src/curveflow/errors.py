"""Exception types shared across the package."""


class CurveFlowError(Exception):
    """Base class for every error raised by curveflow."""


class InvalidCurve(CurveFlowError):
    """Vertex data does not describe a valid closed polygon."""


class InvalidN(CurveFlowError):
    """Requested node count is unsupported for the curve kind."""


class CuspError(CurveFlowError):
    """Adjacent edge tangents are (nearly) antiparallel; the averaged
    tangent is undefined."""


class NonpositivePerimeter(CurveFlowError):
    """Forcing was evaluated at a perimeter <= 0."""


class SingularSystem(CurveFlowError):
    """A cyclic (block) tridiagonal system could not be solved reliably."""


class MeshDegenerate(CurveFlowError):
    """A time step produced a polygon with a collapsed edge."""


class SizeMismatch(CurveFlowError):
    """Grid sizes do not nest as required (fine grid must have 2N nodes)."""


class DegenerateInput(CurveFlowError):
    """A polygon handed to the manifold distance has a near-zero edge."""


class NumericalDegeneracy(CurveFlowError):
    """The segment arrangement could not be resolved within tolerance.

    Carries the grid-quadrature fallback value in ``fallback``.
    """

    def __init__(self, message: str, fallback: float):
        super().__init__(f"{message} (grid-quadrature fallback: {fallback})")
        self.fallback = fallback


class NonpositiveError(CurveFlowError):
    """Convergence orders require strictly positive error values."""


class DominanceWarning(UserWarning):
    """A cyclic system is not strictly diagonally dominant."""


class EvolutionAborted(CurveFlowError):
    """A trajectory failed mid-run; carries the partial results.

    Attributes:
        level: index of the failed time step (1-based; level k advances
            t_{k-1} -> t_k).
        time: the time t_k the failed step targeted.
        cause: the underlying step error.
        curves: the curves computed so far (levels 0 .. level-1).
        record: partial EvolutionRecord when raised by run_evolution.
    """

    def __init__(self, level: int, time: float, cause: CurveFlowError, curves=None):
        super().__init__(f"step failed at level {level} (t = {time:g}): {cause}")
        self.level = level
        self.time = time
        self.cause = cause
        self.curves = curves
        self.record = None
