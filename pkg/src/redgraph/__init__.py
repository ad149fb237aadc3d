"""Exact arithmetic on reduction graphs.

Measures at Shilov points from special-fiber data, potential theory on
metrized graphs (distributional second derivative, exact Poisson solver,
Green functions, Dirichlet energy), metrized line bundles on a circle with
their curvature and height shifts, equidistribution diagnostics for
Tate-curve torsion orbits, quadratic-bump height lower bounds, and
escape-rate canonical local heights.  All core computations are exact over
``fractions.Fraction``; floats appear only as display shadows.
"""

from .bounds import (
    BumpSpec,
    IntervalComplement,
    closed_form_bound,
    coefficient_objective,
    lower_bound,
    optimal_bump,
    optimize_coefficient,
    preset_complement,
)
from .bundles import (
    GlobalHeight,
    MetrizedBundle,
    PlaceTag,
    assemble_global,
    curvature,
    height_shift_point,
    height_shift_variety,
    is_semipositive,
    neron_tate_bundle,
    neron_tate_potential,
    phi_energy,
    szpiro_ullmo_average,
)
from .canheight import (
    LocalHeightValue,
    PolyMap,
    canonical_local_height,
    padic_valuation,
)
from .core import (
    Edge,
    GraphDivisor,
    GraphMeasure,
    GraphPoint,
    MetrizedGraph,
    PiecewisePoly,
    as_rational,
    circle_graph,
    integrate,
    rational_str,
    total_mass,
)
from .errors import (
    EmptySampleError,
    GraphMismatchError,
    LabelMapError,
    MassImbalanceError,
    ModelInconsistencyError,
    NotACircleError,
    RedgraphError,
    ZeroDegreeError,
)
from .potential import PoissonProblem, d2, energy, green, solve_d2
from .shilov import (
    DiscreteMeasure,
    FiberComponent,
    SpecialFiberModel,
    normalized_measure,
    product_measure,
    pushforward,
    shilov_measure,
)
from .tate import (
    ConvergenceRow,
    OrbitSample,
    TateCurve,
    empirical_measure,
    kolmogorov_distance,
    random_specializations,
    specialize,
    torsion_specializations,
    wasserstein_distance,
    weak_convergence_report,
)

__version__ = "0.1.0"

__all__ = [
    "BumpSpec",
    "ConvergenceRow",
    "DiscreteMeasure",
    "Edge",
    "EmptySampleError",
    "FiberComponent",
    "GlobalHeight",
    "GraphDivisor",
    "GraphMeasure",
    "GraphMismatchError",
    "GraphPoint",
    "IntervalComplement",
    "LabelMapError",
    "LocalHeightValue",
    "MassImbalanceError",
    "MetrizedBundle",
    "MetrizedGraph",
    "ModelInconsistencyError",
    "NotACircleError",
    "OrbitSample",
    "PiecewisePoly",
    "PlaceTag",
    "PoissonProblem",
    "PolyMap",
    "RedgraphError",
    "SpecialFiberModel",
    "TateCurve",
    "ZeroDegreeError",
    "as_rational",
    "assemble_global",
    "canonical_local_height",
    "circle_graph",
    "closed_form_bound",
    "coefficient_objective",
    "curvature",
    "d2",
    "empirical_measure",
    "energy",
    "green",
    "height_shift_point",
    "height_shift_variety",
    "integrate",
    "is_semipositive",
    "kolmogorov_distance",
    "lower_bound",
    "neron_tate_bundle",
    "neron_tate_potential",
    "normalized_measure",
    "optimal_bump",
    "optimize_coefficient",
    "padic_valuation",
    "phi_energy",
    "preset_complement",
    "product_measure",
    "pushforward",
    "random_specializations",
    "rational_str",
    "shilov_measure",
    "solve_d2",
    "specialize",
    "szpiro_ullmo_average",
    "torsion_specializations",
    "total_mass",
    "wasserstein_distance",
    "weak_convergence_report",
]
