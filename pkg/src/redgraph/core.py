"""Exact-arithmetic metrized graphs: points, divisors, functions, measures.

Everything here is exact.  Edge lengths, offsets, polynomial coefficients
and measure weights are ``fractions.Fraction`` values, and every operation
(evaluation, integration, measure arithmetic) is closed-form, so identities
can be tested with zero tolerance.  All objects are immutable after
construction and safe to share between threads.

Floating point appears nowhere in this module; callers that want float
shadows convert at the very end.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import GraphMismatchError

RationalLike = Union[Fraction, int, str]
QuadCoeffs = tuple[Fraction, Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)

# Edge-end markers used in incidence lists.
SOURCE_END = 0
TARGET_END = 1


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a rational value: {value!r}")


def rational_str(value: RationalLike) -> str:
    """Serialize a rational as "p/q", always with an explicit denominator."""
    f = as_rational(value)
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class Edge:
    """One edge record; the direction only fixes the arc-length coordinate."""

    source: str
    target: str
    length: Fraction


@dataclass(frozen=True)
class MetrizedGraph:
    """Finite connected graph with positive rational edge lengths.

    Loops and multi-edges are allowed.  Edges are addressed by their index
    in ``edges``; the arc-length coordinate on edge ``e`` runs from 0 at
    ``edges[e].source`` to ``edges[e].length`` at ``edges[e].target``.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValueError("a graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        declared = set(self.vertices)
        for edge in self.edges:
            if edge.source not in declared or edge.target not in declared:
                raise ValueError(f"edge endpoint is not a declared vertex: {edge}")
            if not isinstance(edge.length, Fraction):
                raise TypeError(f"edge length must be a Fraction: {edge}")
            if edge.length <= 0:
                raise ValueError(f"edge length must be positive: {edge}")
        self._check_connected()

    def _check_connected(self) -> None:
        adjacency: dict[str, list[str]] = {v: [] for v in self.vertices}
        for edge in self.edges:
            adjacency[edge.source].append(edge.target)
            adjacency[edge.target].append(edge.source)
        seen = {self.vertices[0]}
        frontier = [self.vertices[0]]
        while frontier:
            for u in adjacency[frontier.pop()]:
                if u not in seen:
                    seen.add(u)
                    frontier.append(u)
        if len(seen) != len(self.vertices):
            raise ValueError("graph is not connected")

    @classmethod
    def of(
        cls,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str, RationalLike]],
    ) -> "MetrizedGraph":
        """Build from plain data, coercing lengths to exact rationals."""
        return cls(
            tuple(vertices),
            tuple(Edge(src, dst, as_rational(length)) for src, dst, length in edges),
        )

    @cached_property
    def _incidences(self) -> dict[str, tuple[tuple[int, int], ...]]:
        inc: dict[str, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for e, edge in enumerate(self.edges):
            inc[edge.source].append((e, SOURCE_END))
            inc[edge.target].append((e, TARGET_END))
        return {v: tuple(ends) for v, ends in inc.items()}

    def incident_ends(self, vertex: str) -> tuple[tuple[int, int], ...]:
        """(edge index, end) pairs meeting ``vertex``; a loop appears twice."""
        return self._incidences[vertex]

    @property
    def total_length(self) -> Fraction:
        return sum((edge.length for edge in self.edges), ZERO)

    def edge_length(self, edge: int) -> Fraction:
        return self.edges[edge].length

    def is_loop(self, edge: int) -> bool:
        rec = self.edges[edge]
        return rec.source == rec.target

    def vertex_point(self, vertex: str) -> "GraphPoint":
        if vertex not in self._incidences:
            raise ValueError(f"unknown vertex: {vertex!r}")
        return GraphPoint(vertex=vertex)

    def point(self, edge: int, offset: RationalLike) -> "GraphPoint":
        """Canonical point on ``edge``: endpoint offsets collapse to vertices."""
        if not 0 <= edge < len(self.edges):
            raise ValueError(f"unknown edge index {edge}")
        rec = self.edges[edge]
        off = as_rational(offset)
        if off < 0 or off > rec.length:
            raise ValueError(f"offset {off} outside [0, {rec.length}] on edge {edge}")
        if off == 0:
            return GraphPoint(vertex=rec.source)
        if off == rec.length:
            return GraphPoint(vertex=rec.target)
        return GraphPoint(edge=edge, offset=off)

    def contains_point(self, point: "GraphPoint") -> bool:
        if point.vertex is not None:
            return point.vertex in self._incidences
        assert point.edge is not None and point.offset is not None
        return point.edge < len(self.edges) and 0 < point.offset < self.edges[point.edge].length

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"from": e.source, "to": e.target, "length": rational_str(e.length)}
                for e in self.edges
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MetrizedGraph":
        return cls.of(
            data["vertices"],
            [(e["from"], e["to"], e["length"]) for e in data["edges"]],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "MetrizedGraph":
        return cls.from_dict(json.loads(text))


def circle_graph(ell: RationalLike) -> MetrizedGraph:
    """Circle of circumference ``ell``: one vertex, one loop edge."""
    length = as_rational(ell)
    if length <= 0:
        raise ValueError(f"circle length must be positive, got {length}")
    return MetrizedGraph(("v0",), (Edge("v0", "v0", length),))


@dataclass(frozen=True)
class GraphPoint:
    """A point of a metrized graph in canonical form.

    Either ``vertex`` is set, or ``edge``/``offset`` are set with the offset
    strictly inside the edge.  Build points through ``MetrizedGraph.point``
    and ``MetrizedGraph.vertex_point`` so that offsets 0 and length collapse
    onto the endpoint vertices; equality of canonical points then decides
    equality of metric points.
    """

    vertex: str | None = None
    edge: int | None = None
    offset: Fraction | None = None

    def __post_init__(self) -> None:
        at_vertex = self.vertex is not None
        on_edge = self.edge is not None and self.offset is not None
        if at_vertex == on_edge:
            raise ValueError("a point is either a vertex or an interior edge point")
        if on_edge and self.offset <= 0:
            raise ValueError("interior edge points need offset > 0; use MetrizedGraph.point")

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self) -> tuple:
        if self.vertex is not None:
            return (0, self.vertex, -1, ZERO)
        return (1, "", self.edge, self.offset)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.vertex is not None:
            return f"GraphPoint(vertex={self.vertex!r})"
        return f"GraphPoint(edge={self.edge}, offset={self.offset})"


class GraphDivisor:
    """Finite formal sum of graph points with rational coefficients.

    Zero coefficients are never stored, and repeated points are accumulated,
    so equal divisors compare equal.  ``degree`` is the coefficient sum.
    """

    __slots__ = ("_weights",)

    def __init__(
        self,
        weights: Mapping[GraphPoint, RationalLike]
        | Iterable[tuple[GraphPoint, RationalLike]] = (),
    ) -> None:
        items = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[GraphPoint, Fraction] = {}
        for point, weight in items:
            if not isinstance(point, GraphPoint):
                raise TypeError(f"divisor keys must be GraphPoint, got {point!r}")
            acc[point] = acc.get(point, ZERO) + as_rational(weight)
        self._weights = {
            p: w for p, w in sorted(acc.items(), key=lambda kv: kv[0].sort_key()) if w != 0
        }

    @property
    def degree(self) -> Fraction:
        return sum(self._weights.values(), ZERO)

    def weight(self, point: GraphPoint) -> Fraction:
        return self._weights.get(point, ZERO)

    def items(self) -> tuple[tuple[GraphPoint, Fraction], ...]:
        return tuple(self._weights.items())

    def points(self) -> tuple[GraphPoint, ...]:
        return tuple(self._weights)

    def __len__(self) -> int:
        return len(self._weights)

    def __bool__(self) -> bool:
        return bool(self._weights)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GraphDivisor) and self._weights == other._weights

    def __add__(self, other: "GraphDivisor") -> "GraphDivisor":
        merged = dict(self._weights)
        for p, w in other._weights.items():
            merged[p] = merged.get(p, ZERO) + w
        return GraphDivisor(merged)

    def __neg__(self) -> "GraphDivisor":
        return GraphDivisor({p: -w for p, w in self._weights.items()})

    def __sub__(self, other: "GraphDivisor") -> "GraphDivisor":
        return self + (-other)

    def scale(self, factor: RationalLike) -> "GraphDivisor":
        c = as_rational(factor)
        return GraphDivisor({p: c * w for p, w in self._weights.items()})

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"GraphDivisor({self._weights!r})"


def _quad_value(coeffs: QuadCoeffs, t: Fraction) -> Fraction:
    c2, c1, c0 = coeffs
    return (c2 * t + c1) * t + c0


def _quad_slope(coeffs: QuadCoeffs, t: Fraction) -> Fraction:
    c2, c1, _ = coeffs
    return 2 * c2 * t + c1


def _quad_integral(coeffs: QuadCoeffs, a: Fraction, b: Fraction) -> Fraction:
    """Integral of c2*t^2 + c1*t + c0 over [a, b], closed form."""
    c2, c1, c0 = coeffs
    return c2 * (b**3 - a**3) / 3 + c1 * (b**2 - a**2) / 2 + c0 * (b - a)


def _merge_equal_pieces(breakpoints, pieces):
    """Drop breakpoints separating pieces with identical data."""
    out_bk: list = []
    out_pieces = [pieces[0]]
    for x, piece in zip(breakpoints, pieces[1:]):
        if piece == out_pieces[-1]:
            continue
        out_bk.append(x)
        out_pieces.append(piece)
    return tuple(out_bk), tuple(out_pieces)


def _validate_breakpoints(breakpoints, n_pieces, length, edge):
    if n_pieces != len(breakpoints) + 1:
        raise ValueError(
            f"edge {edge}: {len(breakpoints)} breakpoints need "
            f"{len(breakpoints) + 1} pieces, got {n_pieces}"
        )
    for x, y in zip(breakpoints, breakpoints[1:]):
        if not x < y:
            raise ValueError(f"edge {edge}: breakpoints must be strictly increasing")
    if breakpoints and (breakpoints[0] <= 0 or breakpoints[-1] >= length):
        raise ValueError(f"edge {edge}: breakpoints must lie strictly inside (0, {length})")


class PiecewisePoly:
    """Continuous piecewise-quadratic function on a metrized graph.

    Stored per edge as breakpoints strictly inside the edge together with
    one coefficient triple (c2, c1, c0) per piece, read in the edge
    arc-length coordinate: value = c2*t^2 + c1*t + c0.  Edges omitted at
    construction carry the zero function.  Continuity is enforced across
    breakpoints and at every vertex.  Adjacent pieces with equal
    coefficients are merged, so equal functions compare equal.
    """

    __slots__ = ("graph", "_pieces")

    def __init__(
        self,
        graph: MetrizedGraph,
        pieces: Mapping[int, tuple] | Iterable[tuple[int, tuple]] = (),
    ) -> None:
        if not graph.edges:
            raise ValueError("piecewise functions need a graph with at least one edge")
        data = dict(pieces.items() if isinstance(pieces, Mapping) else pieces)
        normalized: list[tuple[tuple[Fraction, ...], tuple[QuadCoeffs, ...]]] = []
        for e, rec in enumerate(graph.edges):
            if e in data:
                raw_bk, raw_cs = data.pop(e)
                bk = tuple(as_rational(x) for x in raw_bk)
                cs = tuple(
                    (as_rational(c2), as_rational(c1), as_rational(c0))
                    for c2, c1, c0 in raw_cs
                )
            else:
                bk, cs = (), ((ZERO, ZERO, ZERO),)
            _validate_breakpoints(bk, len(cs), rec.length, e)
            for i, x in enumerate(bk):
                if _quad_value(cs[i], x) != _quad_value(cs[i + 1], x):
                    raise ValueError(f"edge {e}: discontinuity at breakpoint {x}")
            normalized.append(_merge_equal_pieces(bk, cs))
        if data:
            raise ValueError(f"piece data for unknown edges: {sorted(data)}")
        self.graph = graph
        self._pieces = tuple(normalized)
        self._check_vertex_continuity()

    def _end_value(self, edge: int, end: int) -> Fraction:
        bk, cs = self._pieces[edge]
        if end == SOURCE_END:
            return _quad_value(cs[0], ZERO)
        return _quad_value(cs[-1], self.graph.edges[edge].length)

    def _check_vertex_continuity(self) -> None:
        for v in self.graph.vertices:
            ends = self.graph.incident_ends(v)
            if not ends:
                continue
            first = self._end_value(*ends[0])
            for e, end in ends[1:]:
                if self._end_value(e, end) != first:
                    raise ValueError(f"function value disagrees at vertex {v!r}")

    @classmethod
    def constant(cls, graph: MetrizedGraph, value: RationalLike) -> "PiecewisePoly":
        c = as_rational(value)
        return cls(graph, {e: ((), ((ZERO, ZERO, c),)) for e in range(len(graph.edges))})

    @classmethod
    def zero(cls, graph: MetrizedGraph) -> "PiecewisePoly":
        return cls.constant(graph, 0)

    def edge_pieces(self, edge: int) -> tuple[tuple[Fraction, ...], tuple[QuadCoeffs, ...]]:
        """(breakpoints, coefficient triples) for one edge, canonical form."""
        return self._pieces[edge]

    def pieces_with_bounds(self, edge: int) -> list[tuple[Fraction, Fraction, QuadCoeffs]]:
        """(start, end, coefficients) triples covering [0, length]."""
        bk, cs = self._pieces[edge]
        bounds = [ZERO, *bk, self.graph.edges[edge].length]
        return [(a, b, c) for a, b, c in zip(bounds, bounds[1:], cs)]

    def value_on_edge(self, edge: int, t: RationalLike) -> Fraction:
        offset = as_rational(t)
        length = self.graph.edges[edge].length
        if offset < 0 or offset > length:
            raise ValueError(f"offset {offset} outside [0, {length}] on edge {edge}")
        bk, cs = self._pieces[edge]
        return _quad_value(cs[bisect_right(bk, offset)], offset)

    def value_at(self, point: GraphPoint) -> Fraction:
        if point.vertex is not None:
            ends = self.graph.incident_ends(point.vertex)
            if not ends:
                raise ValueError(f"vertex {point.vertex!r} not on this graph")
            return self._end_value(*ends[0])
        return self.value_on_edge(point.edge, point.offset)

    def __call__(self, point: GraphPoint) -> Fraction:
        return self.value_at(point)

    def _combine(self, other: "PiecewisePoly", sign: int) -> "PiecewisePoly":
        if self.graph != other.graph:
            raise GraphMismatchError("functions live on different graphs")
        pieces = {}
        for e in range(len(self.graph.edges)):
            bk_a, cs_a = self._pieces[e]
            bk_b, cs_b = other._pieces[e]
            merged = sorted(set(bk_a) | set(bk_b))
            combined = []
            for start in [ZERO, *merged]:
                ca = cs_a[bisect_right(bk_a, start)]
                cb = cs_b[bisect_right(bk_b, start)]
                combined.append(tuple(x + sign * y for x, y in zip(ca, cb)))
            pieces[e] = (tuple(merged), tuple(combined))
        return PiecewisePoly(self.graph, pieces)

    def __add__(self, other):
        if isinstance(other, PiecewisePoly):
            return self._combine(other, 1)
        shift = as_rational(other)
        return PiecewisePoly(
            self.graph,
            {
                e: (bk, tuple((c2, c1, c0 + shift) for c2, c1, c0 in cs))
                for e, (bk, cs) in enumerate(self._pieces)
            },
        )

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "PiecewisePoly":
        return self * Fraction(-1)

    def __sub__(self, other):
        if isinstance(other, PiecewisePoly):
            return self._combine(other, -1)
        return self + (-as_rational(other))

    def __mul__(self, factor: RationalLike) -> "PiecewisePoly":
        c = as_rational(factor)
        return PiecewisePoly(
            self.graph,
            {
                e: (bk, tuple((c * c2, c * c1, c * c0) for c2, c1, c0 in cs))
                for e, (bk, cs) in enumerate(self._pieces)
            },
        )

    def __rmul__(self, factor: RationalLike) -> "PiecewisePoly":
        return self.__mul__(factor)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PiecewisePoly)
            and self.graph == other.graph
            and self._pieces == other._pieces
        )

    def to_dict(self) -> dict:
        return {
            "edges": [
                {
                    "edge": e,
                    "breakpoints": [rational_str(x) for x in bk],
                    "pieces": [
                        {
                            "c2": rational_str(c2),
                            "c1": rational_str(c1),
                            "c0": rational_str(c0),
                        }
                        for c2, c1, c0 in cs
                    ],
                }
                for e, (bk, cs) in enumerate(self._pieces)
            ]
        }

    @classmethod
    def from_dict(cls, graph: MetrizedGraph, data: Mapping) -> "PiecewisePoly":
        pieces = {}
        for entry in data["edges"]:
            pieces[entry["edge"]] = (
                [as_rational(x) for x in entry["breakpoints"]],
                [(p["c2"], p["c1"], p["c0"]) for p in entry["pieces"]],
            )
        return cls(graph, pieces)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PiecewisePoly({self._pieces!r})"


class GraphMeasure:
    """Measure on a metrized graph: Dirac part plus edge densities.

    The discrete part is a ``GraphDivisor``; each edge carries a
    piecewise-constant density given by breakpoints strictly inside the
    edge and one rational value per piece.  Densities are stored in
    canonical merged form, so equal measures compare equal.
    """

    __slots__ = ("graph", "_discrete", "_densities")

    def __init__(
        self,
        graph: MetrizedGraph,
        discrete: GraphDivisor
        | Mapping[GraphPoint, RationalLike]
        | Iterable[tuple[GraphPoint, RationalLike]] = (),
        densities: Mapping[int, tuple] | Iterable[tuple[int, tuple]] = (),
    ) -> None:
        self.graph = graph
        divisor = discrete if isinstance(discrete, GraphDivisor) else GraphDivisor(discrete)
        for point, _ in divisor.items():
            if not graph.contains_point(point):
                raise ValueError(f"point {point!r} is not on this graph")
        self._discrete = divisor
        data = dict(densities.items() if isinstance(densities, Mapping) else densities)
        normalized: list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]] = []
        for e, rec in enumerate(graph.edges):
            if e in data:
                raw_bk, raw_vals = data.pop(e)
                bk = tuple(as_rational(x) for x in raw_bk)
                vals = tuple(as_rational(v) for v in raw_vals)
            else:
                bk, vals = (), (ZERO,)
            _validate_breakpoints(bk, len(vals), rec.length, e)
            normalized.append(_merge_equal_pieces(bk, vals))
        if data:
            raise ValueError(f"density data for unknown edges: {sorted(data)}")
        self._densities = tuple(normalized)

    @classmethod
    def dirac(
        cls, graph: MetrizedGraph, point: GraphPoint, weight: RationalLike = 1
    ) -> "GraphMeasure":
        return cls(graph, ((point, weight),))

    @classmethod
    def constant_density(cls, graph: MetrizedGraph, value: RationalLike) -> "GraphMeasure":
        v = as_rational(value)
        return cls(graph, (), {e: ((), (v,)) for e in range(len(graph.edges))})

    @classmethod
    def uniform(cls, graph: MetrizedGraph) -> "GraphMeasure":
        """Probability measure proportional to arc length."""
        return cls.constant_density(graph, ONE / graph.total_length)

    @property
    def discrete(self) -> GraphDivisor:
        return self._discrete

    def density(self, edge: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """(breakpoints, values) of the density on one edge, canonical form."""
        return self._densities[edge]

    def density_pieces(self, edge: int) -> list[tuple[Fraction, Fraction, Fraction]]:
        """(start, end, value) triples covering [0, length]."""
        bk, vals = self._densities[edge]
        bounds = [ZERO, *bk, self.graph.edges[edge].length]
        return [(a, b, v) for a, b, v in zip(bounds, bounds[1:], vals)]

    @property
    def total_mass(self) -> Fraction:
        mass = self._discrete.degree
        for e in range(len(self.graph.edges)):
            for a, b, v in self.density_pieces(e):
                mass += v * (b - a)
        return mass

    @property
    def is_positive(self) -> bool:
        if any(w < 0 for _, w in self._discrete.items()):
            return False
        return all(v >= 0 for _, vals in self._densities for v in vals)

    def _combine(self, other: "GraphMeasure", sign: int) -> "GraphMeasure":
        if self.graph != other.graph:
            raise GraphMismatchError("measures live on different graphs")
        divisor = self._discrete + (other._discrete if sign > 0 else -other._discrete)
        densities = {}
        for e in range(len(self.graph.edges)):
            bk_a, vals_a = self._densities[e]
            bk_b, vals_b = other._densities[e]
            merged = sorted(set(bk_a) | set(bk_b))
            combined = []
            for start in [ZERO, *merged]:
                va = vals_a[bisect_right(bk_a, start)]
                vb = vals_b[bisect_right(bk_b, start)]
                combined.append(va + sign * vb)
            densities[e] = (tuple(merged), tuple(combined))
        return GraphMeasure(self.graph, divisor, densities)

    def __add__(self, other: "GraphMeasure") -> "GraphMeasure":
        return self._combine(other, 1)

    def __sub__(self, other: "GraphMeasure") -> "GraphMeasure":
        return self._combine(other, -1)

    def __neg__(self) -> "GraphMeasure":
        return self * Fraction(-1)

    def __mul__(self, factor: RationalLike) -> "GraphMeasure":
        c = as_rational(factor)
        return GraphMeasure(
            self.graph,
            self._discrete.scale(c),
            {
                e: (bk, tuple(c * v for v in vals))
                for e, (bk, vals) in enumerate(self._densities)
            },
        )

    def __rmul__(self, factor: RationalLike) -> "GraphMeasure":
        return self.__mul__(factor)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GraphMeasure)
            and self.graph == other.graph
            and self._discrete == other._discrete
            and self._densities == other._densities
        )

    def to_dict(self) -> dict:
        discrete = []
        for point, weight in self._discrete.items():
            entry: dict = (
                {"vertex": point.vertex}
                if point.vertex is not None
                else {"edge": point.edge, "offset": rational_str(point.offset)}
            )
            entry["weight"] = rational_str(weight)
            discrete.append(entry)
        density = []
        for e, (bk, vals) in enumerate(self._densities):
            if bk == () and vals == (ZERO,):
                continue
            density.append(
                {
                    "edge": e,
                    "breakpoints": [rational_str(x) for x in bk],
                    "values": [rational_str(v) for v in vals],
                }
            )
        return {"discrete": discrete, "density": density}

    @classmethod
    def from_dict(cls, graph: MetrizedGraph, data: Mapping) -> "GraphMeasure":
        weights = []
        for entry in data.get("discrete", ()):
            if "vertex" in entry:
                point = graph.vertex_point(entry["vertex"])
            else:
                point = graph.point(entry["edge"], entry["offset"])
            weights.append((point, entry["weight"]))
        densities = {
            entry["edge"]: (entry["breakpoints"], entry["values"])
            for entry in data.get("density", ())
        }
        return cls(graph, weights, densities)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"GraphMeasure(discrete={self._discrete!r}, densities={self._densities!r})"


def integrate(f: PiecewisePoly, mu: GraphMeasure) -> Fraction:
    """Exact integral of ``f`` against ``mu``.

    Dirac weights contribute weight * f(point); each density piece is
    integrated in closed form against the quadratic pieces of ``f``.
    """
    if f.graph != mu.graph:
        raise GraphMismatchError("function and measure live on different graphs")
    total = ZERO
    for point, weight in mu.discrete.items():
        total += weight * f.value_at(point)
    for e in range(len(f.graph.edges)):
        fb, fcs = f.edge_pieces(e)
        db, dvals = mu.density(e)
        merged = sorted(set(fb) | set(db))
        bounds = [ZERO, *merged, f.graph.edges[e].length]
        for a, b in zip(bounds, bounds[1:]):
            rho = dvals[bisect_right(db, a)]
            if rho == 0:
                continue
            total += rho * _quad_integral(fcs[bisect_right(fb, a)], a, b)
    return total


def total_mass(mu: GraphMeasure) -> Fraction:
    """Discrete degree plus integrated density mass."""
    return mu.total_mass
