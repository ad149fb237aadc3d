"""Graph, point, function and measure basics with exact oracles."""

import json
import random
from fractions import Fraction as F

import pytest

from redgraph import (
    GraphDivisor,
    GraphMeasure,
    GraphMismatchError,
    GraphPoint,
    MetrizedGraph,
    PiecewisePoly,
    as_rational,
    circle_graph,
    integrate,
    rational_str,
    total_mass,
)
from generators import fixed_topologies, random_measure, random_poly

ZERO = F(0)


def test_rational_coercion_and_formatting():
    assert as_rational("3/2") == F(3, 2)
    assert as_rational(" -7/3 ") == F(-7, 3)
    assert as_rational(5) == F(5)
    assert rational_str(F(5)) == "5/1"
    assert rational_str("-2/4") == "-1/2"
    with pytest.raises(TypeError):
        as_rational(1.5)


def test_circle_graph_smallest():
    g = circle_graph(1)
    assert len(g.vertices) == 1
    assert g.total_length == 1
    assert g.is_loop(0)


def test_circle_graph_length_five():
    assert circle_graph("5/1").total_length == 5


def test_circle_graph_rejects_nonpositive_length():
    with pytest.raises(ValueError):
        circle_graph(0)
    with pytest.raises(ValueError):
        circle_graph("-1/2")


def test_graph_validation():
    with pytest.raises(ValueError, match="connected"):
        MetrizedGraph.of(["a", "b"], [("a", "a", 1)])
    with pytest.raises(ValueError, match="declared"):
        MetrizedGraph.of(["a"], [("a", "b", 1)])
    with pytest.raises(ValueError, match="positive"):
        MetrizedGraph.of(["a"], [("a", "a", 0)])
    with pytest.raises(ValueError, match="duplicate"):
        MetrizedGraph.of(["a", "a"], [("a", "a", 1)])
    with pytest.raises(ValueError, match="vertex"):
        MetrizedGraph.of([], [])


def test_graph_json_round_trip_is_bit_exact():
    g = MetrizedGraph.of(
        ["v0", "v1"],
        [("v0", "v0", "5/1"), ("v0", "v1", "1/3"), ("v1", "v0", "1/3")],
    )
    text = g.to_json()
    again = MetrizedGraph.from_json(text)
    assert again == g
    assert again.to_json() == text
    assert MetrizedGraph.from_dict(g.to_dict()).to_dict() == g.to_dict()


def test_point_canonicalization():
    g = MetrizedGraph.of(["a", "b"], [("a", "b", 2), ("b", "a", 3)])
    assert g.point(0, 0) == g.vertex_point("a")
    assert g.point(0, 2) == g.vertex_point("b")
    assert g.point(1, 3) == g.vertex_point("a")
    assert g.point(0, 1) == g.point(0, "1/1")
    assert g.point(0, 1) != g.point(1, 1)
    loop = circle_graph(5)
    assert loop.point(0, 0) == loop.point(0, 5) == loop.vertex_point("v0")
    with pytest.raises(ValueError):
        g.point(0, "5/2")
    with pytest.raises(ValueError):
        g.point(0, -1)


def test_graph_point_shape_validation():
    with pytest.raises(ValueError):
        GraphPoint()
    with pytest.raises(ValueError):
        GraphPoint(vertex="a", edge=0, offset=F(1))
    with pytest.raises(ValueError):
        GraphPoint(edge=0, offset=F(0))


def test_divisor_accumulates_and_drops_zeros():
    g = circle_graph(5)
    p = g.point(0, 1)
    q = g.point(0, 2)
    d = GraphDivisor([(p, 2), (p, -2), (q, "3/2")])
    assert d.weight(p) == 0
    assert d.weight(q) == F(3, 2)
    assert len(d) == 1
    assert d.degree == F(3, 2)
    assert (d + d.scale(-1)) == GraphDivisor()
    assert not GraphDivisor()


def test_poly_validation():
    g = circle_graph(2)
    # discontinuity at the breakpoint 1: pieces 0 and t
    with pytest.raises(ValueError, match="discontinuity"):
        PiecewisePoly(g, {0: ((F(1),), ((0, 0, 0), (0, 1, 0)))})
    with pytest.raises(ValueError, match="increasing"):
        PiecewisePoly(g, {0: ((F(1), F(1)), ((0, 0, 0), (0, 0, 0), (0, 0, 0)))})
    with pytest.raises(ValueError, match="inside"):
        PiecewisePoly(g, {0: ((F(0),), ((0, 0, 0), (0, 0, 0)))})
    # vertex continuity on a two-edge graph: f(b) from edge 0 is 2, from edge 1 is 0
    h = MetrizedGraph.of(["a", "b"], [("a", "b", 2), ("b", "a", 1)])
    with pytest.raises(ValueError, match="vertex"):
        PiecewisePoly(h, {0: ((), ((0, 1, 0),))})
    # the loop end values must agree with the vertex value
    with pytest.raises(ValueError, match="vertex"):
        PiecewisePoly(g, {0: ((), ((0, 1, 0),))})


def test_poly_merge_is_canonical():
    g = circle_graph(2)
    split = PiecewisePoly(g, {0: ((F(1),), ((0, 0, 3), (0, 0, 3)))})
    assert split == PiecewisePoly.constant(g, 3)
    assert split.edge_pieces(0) == ((), ((ZERO, ZERO, F(3)),))


def test_poly_evaluation_and_arithmetic():
    g = circle_graph(4)
    # tent function: t on [0,2], 4-t on [2,4]
    tent = PiecewisePoly(g, {0: ((F(2),), ((0, 1, 0), (0, -1, 4)))})
    assert tent.value_on_edge(0, 1) == 1
    assert tent.value_on_edge(0, 2) == 2
    assert tent.value_on_edge(0, 3) == 1
    assert tent.value_at(g.vertex_point("v0")) == 0
    assert tent.value_at(g.point(0, "7/2")) == F(1, 2)
    doubled = 2 * tent
    assert doubled.value_on_edge(0, 1) == 2
    shifted = tent + 5
    assert shifted.value_on_edge(0, 2) == 7
    assert (tent - tent) == PiecewisePoly.zero(g)
    assert (tent + (-tent)) == PiecewisePoly.zero(g)
    with pytest.raises(ValueError):
        tent.value_on_edge(0, 5)


def test_poly_json_round_trip():
    g = MetrizedGraph.of(["a", "b"], [("a", "b", 2), ("b", "a", 1)])
    rng = random.Random(7)
    f = random_poly(rng, g)
    assert PiecewisePoly.from_dict(g, f.to_dict()) == f


def quad_integral(c2, c1, c0, a, b):
    """Test-local closed form for the integral of a quadratic."""
    return c2 * (b**3 - a**3) / 3 + c1 * (b**2 - a**2) / 2 + c0 * (b - a)


def test_integrate_constant_gives_total_mass():
    rng = random.Random(11)
    for g in fixed_topologies():
        mu = random_measure(rng, g)
        one = PiecewisePoly.constant(g, 1)
        assert integrate(one, mu) == mu.total_mass


def test_integrate_dirac_evaluates():
    g = circle_graph(5)
    # f agrees with t near offset 3; it returns linearly to 0 at the loop
    # vertex so the function is continuous there.
    tent = PiecewisePoly(g, {0: ((F(3),), ((0, 1, 0), (0, F(-3, 2), F(15, 2))))})
    mu = GraphMeasure.dirac(g, g.point(0, 3), 1)
    assert integrate(tent, mu) == 3


def test_integrate_invariant_potential_averages_to_zero():
    # integral of t^2/(2L) - t/2 + L/12 against dt/L over [0, L]:
    # L^2/6 - L^2/4 + L^2/12 = 0, checked by the test-local quadrature too.
    for ell in (F(1), F(5), F(7, 3)):
        g = circle_graph(ell)
        coeffs = (F(1, 2) / ell, F(-1, 2), ell / 12)
        potential = PiecewisePoly(g, {0: ((), (coeffs,))})
        uniform = GraphMeasure.constant_density(g, 1 / ell)
        assert quad_integral(*coeffs, F(0), ell) / ell == 0
        assert integrate(potential, uniform) == 0


def test_integrate_matches_independent_quadrature():
    rng = random.Random(23)
    for g in fixed_topologies():
        f = random_poly(rng, g)
        mu = random_measure(rng, g)
        expected = ZERO
        for point, w in mu.discrete.items():
            expected += w * f.value_at(point)
        for e in range(len(g.edges)):
            for a, b, coeffs in f.pieces_with_bounds(e):
                for pa, pb, rho in mu.density_pieces(e):
                    lo, hi = max(a, pa), min(b, pb)
                    if lo < hi:
                        expected += rho * quad_integral(*coeffs, lo, hi)
        assert integrate(f, mu) == expected


def test_integrate_riemann_sum_cross_check():
    rng = random.Random(31)
    g = fixed_topologies()[2]
    f = random_poly(rng, g)
    mu = random_measure(rng, g)
    exact = integrate(f, mu)
    approx = sum(float(w) * float(f.value_at(p)) for p, w in mu.discrete.items())
    steps = 4000
    for e in range(len(g.edges)):
        length = g.edges[e].length
        h = float(length) / steps
        for k in range(steps):
            t = (k + 0.5) * h
            frac_t = F(2 * k + 1, 2 * steps) * length
            rho = 0.0
            for a, b, v in mu.density_pieces(e):
                if a <= frac_t < b:
                    rho = float(v)
                    break
            approx += rho * float(f.value_on_edge(e, frac_t)) * h
    assert abs(float(exact) - approx) < 1e-6


def test_integrate_is_bilinear():
    rng = random.Random(41)
    for trial in range(20):
        g = fixed_topologies()[trial % 5]
        f1, f2 = random_poly(rng, g), random_poly(rng, g)
        mu1, mu2 = random_measure(rng, g), random_measure(rng, g)
        a = F(rng.randint(-3, 3), rng.randint(1, 4))
        assert integrate(a * f1 + f2, mu1) == a * integrate(f1, mu1) + integrate(f2, mu1)
        assert integrate(f1, mu1 * a + mu2) == a * integrate(f1, mu1) + integrate(f1, mu2)


def test_integrate_rejects_mismatched_graphs():
    f = PiecewisePoly.zero(circle_graph(1))
    mu = GraphMeasure.uniform(circle_graph(2))
    with pytest.raises(GraphMismatchError):
        integrate(f, mu)


def test_total_mass_examples():
    g = circle_graph(7)
    uniform = GraphMeasure.constant_density(g, F(1, 7))
    assert total_mass(uniform) == 1
    delta = GraphMeasure.dirac(g, g.vertex_point("v0"))
    assert total_mass(delta - uniform) == 0
    p, q = g.point(0, 1), g.point(0, 2)
    assert total_mass(GraphMeasure(g, [(p, 3), (q, 2)])) == 5


def test_total_mass_is_additive():
    rng = random.Random(55)
    for g in fixed_topologies():
        mu, nu = random_measure(rng, g), random_measure(rng, g)
        assert total_mass(mu + nu) == total_mass(mu) + total_mass(nu)
        assert total_mass(mu * F(-3, 2)) == F(-3, 2) * total_mass(mu)


def test_measure_canonical_form_and_round_trip():
    g = circle_graph(4)
    mu = GraphMeasure(g, [(g.point(0, 1), "1/2")], {0: ((F(2),), (F(1, 4), F(1, 4)))})
    # equal adjacent densities merge
    assert mu.density(0) == ((), (F(1, 4),))
    data = json.loads(json.dumps(mu.to_dict()))
    assert GraphMeasure.from_dict(g, data) == mu


def test_measure_rejects_foreign_points_and_unknown_edges():
    g = circle_graph(4)
    other = MetrizedGraph.of(["a", "b"], [("a", "b", 2)])
    with pytest.raises(ValueError):
        GraphMeasure(g, [(other.vertex_point("a"), 1)])
    with pytest.raises(ValueError):
        GraphMeasure(g, (), {3: ((), (F(1),))})
