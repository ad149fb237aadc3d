"""Metrized line bundles on a reduction graph and their height formulas.

A bundle is a specialized divisor (integer coefficients) together with a
continuous graph function; its curvature is the divisor part plus the
distributional second derivative of the function.  Local heights are
returned as exact rational coefficients of log N_v; the residue cardinality
N_v rides along in a ``PlaceTag`` and only enters when a global value is
assembled as a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    GraphDivisor,
    GraphMeasure,
    GraphPoint,
    MetrizedGraph,
    PiecewisePoly,
    RationalLike,
    ZERO,
    as_rational,
    circle_graph,
    integrate,
    rational_str,
)
from .errors import GraphMismatchError, MassImbalanceError, ZeroDegreeError
from .potential import PoissonProblem, d2, energy, green, solve_d2


@dataclass(frozen=True)
class PlaceTag:
    """A finite place, reduced to the cardinality of its residue field."""

    residue_cardinality: int

    def __post_init__(self) -> None:
        if self.residue_cardinality < 2:
            raise ValueError(
                f"residue cardinality must be >= 2, got {self.residue_cardinality}"
            )


@dataclass(frozen=True)
class MetrizedBundle:
    """Specialized divisor plus graph function; the metric twist is exp(-g)."""

    graph: MetrizedGraph
    divisor: GraphDivisor
    twist: PiecewisePoly

    def __post_init__(self) -> None:
        if self.twist.graph != self.graph:
            raise GraphMismatchError("twist function lives on a different graph")
        for point, weight in self.divisor.items():
            if weight.denominator != 1:
                raise ValueError(f"divisor coefficients must be integers, got {weight}")
            if not self.graph.contains_point(point):
                raise ValueError(f"divisor point {point!r} is not on the graph")

    @property
    def degree(self) -> Fraction:
        return self.divisor.degree


def curvature(bundle: MetrizedBundle) -> GraphMeasure:
    """Divisor Diracs plus d2 of the twist; mass equals the bundle degree."""
    return GraphMeasure(bundle.graph, bundle.divisor) + d2(bundle.twist)


def is_semipositive(bundle: MetrizedBundle) -> bool:
    """True iff the curvature has no negative Dirac weight or density."""
    return curvature(bundle).is_positive


def neron_tate_potential(ell: RationalLike) -> PiecewisePoly:
    """Closed form of the circle potential normalized against arc length.

    On a circle of circumference L this is t^2/(2L) - t/2 + L/12, the
    potential of the vertex whose integral against the rotation-invariant
    probability measure vanishes.
    """
    length = as_rational(ell)
    graph = circle_graph(length)
    coeffs = (Fraction(1, 2) / length, Fraction(-1, 2), length / 12)
    return PiecewisePoly(graph, {0: ((), (coeffs,))})


def neron_tate_bundle(ell: RationalLike) -> MetrizedBundle:
    """Degree-one bundle on the circle whose curvature is uniform.

    The twist is computed by the Poisson solver as the potential of the
    vertex against the invariant probability measure; it agrees with the
    closed form ``neron_tate_potential`` exactly.
    """
    length = as_rational(ell)
    graph = circle_graph(length)
    origin = graph.vertex_point("v0")
    uniform = GraphMeasure.constant_density(graph, Fraction(1) / length)
    twist = green(graph, origin, uniform)
    return MetrizedBundle(graph, GraphDivisor({origin: Fraction(1)}), twist)


def height_shift_point(phi: PiecewisePoly, mu_x: GraphMeasure) -> Fraction:
    """Height shift of a point measure under the twist phi.

    Twisting the metric by phi moves the height of a point with
    specialization measure mu_x by this coefficient of log N_v.
    """
    if mu_x.total_mass != 1:
        raise MassImbalanceError("point measure must be a probability measure")
    return integrate(phi, mu_x)


def height_shift_variety(
    bundle: MetrizedBundle, phi: PiecewisePoly, eps: RationalLike
) -> Fraction:
    """Height shift of the variety under the twist eps*phi.

    Quadratic in eps with zero constant term: the linear coefficient is the
    curvature average of phi and the quadratic one is -energy(phi)/(2 deg).
    """
    deg = bundle.degree
    if deg <= 0:
        raise ZeroDegreeError(f"bundle degree must be positive, got {deg}")
    e = as_rational(eps)
    return e * integrate(phi, curvature(bundle)) / deg - e * e * energy(phi) / (2 * deg)


def phi_energy(graph: MetrizedGraph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Dirichlet energy of the potential with d2 equal to dirac(p) - dirac(q).

    The potential is only defined up to the gauge of an additive constant;
    the energy is gauge invariant, symmetric in (p, q), and zero iff p == q.
    """
    if p == q:
        return ZERO
    target = GraphMeasure.dirac(graph, p) - GraphMeasure.dirac(graph, q)
    potential = solve_d2(PoissonProblem(graph, target, base_point=q))
    return energy(potential)


def szpiro_ullmo_average(ell: RationalLike) -> Fraction:
    """Arc-length average of phi_energy between a moving point and the vertex.

    Computed exactly: the pair energy at offset t on a circle of
    circumference L is t(L-t)/L, and its average against the invariant
    probability measure is L/6.
    """
    length = as_rational(ell)
    graph = circle_graph(length)
    pair_energy = PiecewisePoly(
        graph, {0: ((), ((Fraction(-1) / length, Fraction(1), ZERO),))}
    )
    uniform = GraphMeasure.constant_density(graph, Fraction(1) / length)
    return integrate(pair_energy, uniform)


@dataclass(frozen=True)
class GlobalHeight:
    """Exact symbolic sum of local contributions c_v * log N_v."""

    terms: tuple[tuple[Fraction, int], ...]

    def as_float(self) -> float:
        return sum(float(c) * math.log(n) for c, n in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{rational_str(c)} log {n}" for c, n in self.terms)


def assemble_global(contributions: list[tuple[RationalLike, PlaceTag]]) -> GlobalHeight:
    """Collect per-place coefficients into one symbolic sum plus its float.

    Contributions at the same residue cardinality are combined exactly;
    zero terms are dropped.
    """
    acc: dict[int, Fraction] = {}
    for coefficient, place in contributions:
        n = place.residue_cardinality
        acc[n] = acc.get(n, ZERO) + as_rational(coefficient)
    return GlobalHeight(tuple((c, n) for n, c in sorted(acc.items()) if c != 0))
