"""equiflow: occupation times of torus translation flows, section
functions, and exact discrepancy of Kronecker sequences.

The package is organized by subject: `slope` (continued fractions and
fixed-point slope arithmetic), `geometry` (scenes as boolean algebra over
convex primitives, areas, boundary charts, degenerate directions), `flow`
(exact trajectory decomposition and occupation/error terms), `section`
(the section function tau and its Sobolev diagnostics), `discrepancy`
(exact star/L^p discrepancy), and `experiments` (scaling studies wired to
the `equiflow` command-line tool).
"""

from .discrepancy import (
    DiscrepancyValue,
    PointSet1D,
    fourier_coefficient,
    gap_spectrum,
    kh_bound,
    kronecker_points,
    lp_discrepancy,
    lp_variation_1d,
    star_discrepancy,
)
from .errors import (
    BudgetError,
    ConfigError,
    DegenerateDirectionWarning,
    EquiflowError,
    InsufficientConvergents,
    NonconvergentQuadrature,
    PrecisionExhausted,
    SceneError,
    UnresolvedTangency,
    UnsupportedProfile,
    ValidationError,
)
from .experiments import (
    ExperimentConfig,
    run_discrepancy_scaling,
    run_error_scaling,
    run_liouville_demo,
)
from .flow import (
    ErrorCurve,
    Segment,
    Trajectory,
    decompose,
    error_curve,
    error_term,
    occupation_time,
    weighted_occupation,
)
from .geometry import (
    BoundaryPiece,
    Complement,
    DegenerateDirection,
    DegenerateSlopeSet,
    Disc,
    Intersection,
    IntervalSet,
    Polygon,
    PowerEpigraph,
    Prim,
    SetExpr,
    Superellipse,
    Union,
    adaptive_quadrature,
    area,
    boundary_pieces,
    chart_slope,
    clip_segment,
    contains,
    degenerate_slopes,
    expr_digest,
)
from .scene import dump_scene, load_scene, parse_scene, scene_dict, scene_digest
from .section import (
    SobolevReport,
    TauSamples,
    discretization_identity,
    fubini_check,
    sobolev_seminorm,
    tau,
    tau_density,
    tau_samples,
)
from .slope import (
    DEFAULT_BITS,
    Slope,
    continued_fraction,
    default_bits,
    from_partial_quotients,
    is_badly_approximable,
    ostrowski_digits,
    resolve_slope,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # slope
    "DEFAULT_BITS",
    "Slope",
    "continued_fraction",
    "default_bits",
    "from_partial_quotients",
    "is_badly_approximable",
    "ostrowski_digits",
    "resolve_slope",
    # geometry
    "BoundaryPiece",
    "Complement",
    "DegenerateDirection",
    "DegenerateSlopeSet",
    "Disc",
    "Intersection",
    "IntervalSet",
    "Polygon",
    "PowerEpigraph",
    "Prim",
    "SetExpr",
    "Superellipse",
    "Union",
    "adaptive_quadrature",
    "area",
    "boundary_pieces",
    "chart_slope",
    "clip_segment",
    "contains",
    "degenerate_slopes",
    "expr_digest",
    # scenes
    "dump_scene",
    "load_scene",
    "parse_scene",
    "scene_dict",
    "scene_digest",
    # flow
    "ErrorCurve",
    "Segment",
    "Trajectory",
    "decompose",
    "error_curve",
    "error_term",
    "occupation_time",
    "weighted_occupation",
    # section
    "SobolevReport",
    "TauSamples",
    "discretization_identity",
    "fubini_check",
    "sobolev_seminorm",
    "tau",
    "tau_density",
    "tau_samples",
    # discrepancy
    "DiscrepancyValue",
    "PointSet1D",
    "fourier_coefficient",
    "gap_spectrum",
    "kh_bound",
    "kronecker_points",
    "lp_discrepancy",
    "lp_variation_1d",
    "star_discrepancy",
    # experiments
    "ExperimentConfig",
    "run_discrepancy_scaling",
    "run_error_scaling",
    "run_liouville_demo",
    # errors
    "BudgetError",
    "ConfigError",
    "DegenerateDirectionWarning",
    "EquiflowError",
    "InsufficientConvergents",
    "NonconvergentQuadrature",
    "PrecisionExhausted",
    "SceneError",
    "UnresolvedTangency",
    "UnsupportedProfile",
    "ValidationError",
]
