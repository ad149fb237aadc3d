"""Potential theory on metrized graphs.

``d2`` is the distributional second derivative: on each quadratic piece it
contributes the constant density f'', and at every vertex or interior
breakpoint a Dirac whose weight is the sum of the outgoing slopes of f
there.  Its total mass is always zero, and the sign convention is pinned by
the exact identity ``integrate(f, d2(f)) == -energy(f)``.

``solve_d2`` inverts ``d2`` on mass-zero targets: the density and interior
Dirac jumps determine each edge up to a linear term, and the remaining
unknowns (one slope per edge, one value per vertex) satisfy value matching
at edge ends plus a flux balance at each vertex.  The system is solved by
exact Gaussian elimination; the kernel is the constants, removed by the
requested normalization.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    SOURCE_END,
    ZERO,
    GraphMeasure,
    GraphPoint,
    MetrizedGraph,
    PiecewisePoly,
    _quad_slope,
    integrate,
)
from .errors import GraphMismatchError, MassImbalanceError


def d2(f: PiecewisePoly) -> GraphMeasure:
    """Distributional second derivative of ``f``; total mass is exactly 0."""
    graph = f.graph
    weights: dict[GraphPoint, Fraction] = {}
    densities = {}
    for e in range(len(graph.edges)):
        bk, cs = f.edge_pieces(e)
        densities[e] = (bk, tuple(2 * coeffs[0] for coeffs in cs))
        for i, x in enumerate(bk):
            jump = _quad_slope(cs[i + 1], x) - _quad_slope(cs[i], x)
            if jump:
                point = graph.point(e, x)
                weights[point] = weights.get(point, ZERO) + jump
    for v in graph.vertices:
        outgoing = ZERO
        for e, end in graph.incident_ends(v):
            bk, cs = f.edge_pieces(e)
            if end == SOURCE_END:
                outgoing += _quad_slope(cs[0], ZERO)
            else:
                outgoing -= _quad_slope(cs[-1], graph.edges[e].length)
        if outgoing:
            point = graph.vertex_point(v)
            weights[point] = weights.get(point, ZERO) + outgoing
    return GraphMeasure(graph, weights, densities)


def energy(f: PiecewisePoly) -> Fraction:
    """Dirichlet energy: the exact integral of (f')^2 over the graph."""
    total = ZERO
    for e in range(len(f.graph.edges)):
        for a, b, (c2, c1, _) in f.pieces_with_bounds(e):
            # (2*c2*t + c1)^2 integrated over [a, b]
            total += (
                4 * c2 * c2 * (b**3 - a**3) / 3
                + 2 * c2 * c1 * (b**2 - a**2)
                + c1 * c1 * (b - a)
            )
    return total


@dataclass(frozen=True)
class PoissonProblem:
    """Find f with ``d2(f) == target`` pinned by one normalization.

    Exactly one of ``base_point`` (f vanishes there) or ``reference`` (a
    probability measure against which f integrates to zero) must be given.
    The target must have total mass zero, or no solution exists.
    """

    graph: MetrizedGraph
    target: GraphMeasure
    base_point: GraphPoint | None = None
    reference: GraphMeasure | None = None

    def __post_init__(self) -> None:
        if (self.base_point is None) == (self.reference is None):
            raise ValueError("give exactly one of base_point or reference")
        if self.target.graph != self.graph:
            raise GraphMismatchError("target measure lives on a different graph")
        if self.target.total_mass != 0:
            raise MassImbalanceError(
                f"target must have total mass 0, got {self.target.total_mass}"
            )
        if self.base_point is not None and not self.graph.contains_point(self.base_point):
            raise ValueError(f"base point {self.base_point!r} is not on the graph")
        if self.reference is not None:
            if self.reference.graph != self.graph:
                raise GraphMismatchError("reference measure lives on a different graph")
            if self.reference.total_mass != 1:
                raise MassImbalanceError("reference measure must be a probability measure")


@dataclass(frozen=True)
class _EdgeParticular:
    """Particular solution on one edge with value 0 and slope 0 at the source."""

    breakpoints: tuple[Fraction, ...]
    coeffs: tuple[tuple[Fraction, Fraction, Fraction], ...]
    end_value: Fraction
    end_slope: Fraction


def _particular_solution(graph: MetrizedGraph, target: GraphMeasure, e: int) -> _EdgeParticular:
    length = graph.edges[e].length
    density_bk, density_vals = target.density(e)
    jumps = {p.offset: w for p, w in target.discrete.items() if p.edge == e}
    breakpoints = sorted(set(density_bk) | set(jumps))
    value = slope = ZERO
    coeffs = []
    bounds = [ZERO, *breakpoints, length]
    for a, b in zip(bounds, bounds[1:]):
        if a in jumps:
            slope += jumps[a]
        rho = density_vals[bisect_right(density_bk, a)]
        # on [a, b]: value + slope*(t - a) + rho/2*(t - a)^2, expanded in t
        coeffs.append((rho / 2, slope - rho * a, value - slope * a + rho * a * a / 2))
        step = b - a
        value += slope * step + rho * step * step / 2
        slope += rho * step
    return _EdgeParticular(tuple(breakpoints), tuple(coeffs), value, slope)


def _solve_linear(rows: list[list[Fraction]], rhs: list[Fraction], n_cols: int) -> list[Fraction]:
    """Exact Gauss-Jordan elimination for a consistent full-column-rank system."""
    m = [list(row) + [b] for row, b in zip(rows, rhs)]
    n_rows = len(m)
    rank = 0
    pivot_cols = []
    for c in range(n_cols):
        pivot_row = next((i for i in range(rank, n_rows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][c]
        for i in range(n_rows):
            if i != rank and m[i][c] != 0:
                factor = m[i][c] / pivot
                for j in range(c, n_cols + 1):
                    m[i][j] -= factor * m[rank][j]
        pivot_cols.append(c)
        rank += 1
    for i in range(rank, n_rows):
        if m[i][n_cols] != 0:
            raise MassImbalanceError("no solution: constraints are inconsistent")
    if len(pivot_cols) != n_cols:
        raise ValueError("linear system is underdetermined")
    solution = [ZERO] * n_cols
    for i, c in enumerate(pivot_cols):
        solution[c] = m[i][n_cols] / m[i][c]
    return solution


def solve_d2(problem: PoissonProblem) -> PiecewisePoly:
    """Solve ``d2(f) == target`` exactly with the requested normalization.

    The returned function satisfies the round-trip identity
    ``d2(solve_d2(problem)) == problem.target`` with exact equality.
    """
    graph, target = problem.graph, problem.target
    n_edges = len(graph.edges)
    n_cols = n_edges + len(graph.vertices)
    vertex_col = {v: n_edges + i for i, v in enumerate(graph.vertices)}

    particulars = [_particular_solution(graph, target, e) for e in range(n_edges)]
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    # value matching: phi_source + s_e*length + Q_e(length) == phi_target
    for e, rec in enumerate(graph.edges):
        row = [ZERO] * n_cols
        row[e] = rec.length
        row[vertex_col[rec.source]] += 1
        row[vertex_col[rec.target]] -= 1
        rows.append(row)
        rhs.append(-particulars[e].end_value)
    # flux balance: sum of outgoing slopes at v equals the Dirac weight there
    for v in graph.vertices:
        row = [ZERO] * n_cols
        b = target.discrete.weight(graph.vertex_point(v))
        for e, end in graph.incident_ends(v):
            if end == SOURCE_END:
                row[e] += 1
            else:
                row[e] -= 1
                b += particulars[e].end_slope
        rows.append(row)
        rhs.append(b)
    # pin the constant; the final normalization is applied afterwards
    row = [ZERO] * n_cols
    row[vertex_col[graph.vertices[0]]] = Fraction(1)
    rows.append(row)
    rhs.append(ZERO)

    solution = _solve_linear(rows, rhs, n_cols)
    pieces = {}
    for e, rec in enumerate(graph.edges):
        part = particulars[e]
        slope = solution[e]
        base = solution[vertex_col[rec.source]]
        pieces[e] = (
            part.breakpoints,
            tuple((c2, c1 + slope, c0 + base) for c2, c1, c0 in part.coeffs),
        )
    f = PiecewisePoly(graph, pieces)

    if problem.base_point is not None:
        return f - f.value_at(problem.base_point)
    return f - integrate(f, problem.reference)


def green(graph: MetrizedGraph, pole: GraphPoint, reference: GraphMeasure) -> PiecewisePoly:
    """Potential of ``pole`` against the probability measure ``reference``.

    Returns g with ``d2(g) == reference - dirac(pole)`` and integral of g
    against ``reference`` equal to zero.
    """
    target = reference - GraphMeasure.dirac(graph, pole)
    return solve_d2(PoissonProblem(graph, target, reference=reference))
