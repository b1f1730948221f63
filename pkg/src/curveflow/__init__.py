"""curveflow: nonlocal geometric flows of closed plane curves.

Three fully discrete schemes (finite differences, mass-lumped finite
elements, finite elements with tangential motion) for curvature-driven
flows with perimeter-dependent forcing, plus the grid norms, manifold
distance and experiment harness used to measure their convergence.
"""

__version__ = "0.1.0"

from .curves import CurveKind, sample_curve
from .cyclic import (
    BlockCyclicTridiag,
    CyclicTridiag,
    solve_block_cyclic_tridiag,
    solve_cyclic_tridiag,
)
from .errors import (
    CurveFlowError,
    CuspError,
    DegenerateInput,
    EvolutionAborted,
    InvalidCurve,
    InvalidN,
    MeshDegenerate,
    NonpositiveError,
    NonpositivePerimeter,
    NumericalDegeneracy,
    SingularSystem,
    SizeMismatch,
)
from .forcing import ForceSpec, force
from .geometry import (
    GridCurve,
    averaged_tangent,
    averaged_tangents,
    edge_lengths,
    edge_tangents,
    make_curve,
    mesh_ratio,
    perimeter,
    perp,
    signed_area,
)
from .harness import (
    ConvergenceTable,
    EvolutionRecord,
    Scheme,
    SchemeConfig,
    default_tau_rule,
    eoc,
    evolve_curves,
    run_convergence,
    run_evolution,
)
from .manifold import arrangement_cells, manifold_distance, winding_numbers
from .norms import (
    grid_h1,
    grid_l2,
    grid_linf,
    h1g_bound_check,
    pl_h1_diff,
    pl_l2_diff,
    restrict_fine,
)
from .schemes import (
    StepReport,
    TangentialParams,
    fdm_step,
    fdm_velocity,
    fem_normal_forcing,
    fem_step,
    fem_tm_step,
    fem_tm_velocity,
    fem_velocity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
