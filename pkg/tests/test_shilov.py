"""Special-fiber Dirac measures: mass law, functoriality, products."""

import math
import random
from fractions import Fraction as F

import pytest

from redgraph import (
    DiscreteMeasure,
    LabelMapError,
    ModelInconsistencyError,
    SpecialFiberModel,
    ZeroDegreeError,
    normalized_measure,
    product_measure,
    pushforward,
    shilov_measure,
)


def make_model(rng, n_components=None, exponents=(1,)):
    """Random consistent model: the declared degree is computed from the data."""
    n = n_components or rng.randint(1, 5)
    scale = math.prod(exponents)
    components = []
    for i in range(n):
        mult = rng.randint(1, 4)
        deg = F(rng.randint(0, 12), rng.randint(1, 4))
        components.append((f"X{i}", mult, deg))
    total = sum(F(m) * d for _, m, d in components) / scale
    return SpecialFiberModel.of(components, exponents, total)


def test_single_component_measure():
    model = SpecialFiberModel.of([("X", 1, "7/2")], [1], "7/2")
    mu = shilov_measure(model)
    assert mu.items() == (("X", F(7, 2)),)


def test_good_reduction_projective_line():
    # one component, multiplicity 1, degree 1: the whole mass sits at the
    # single distinguished point.
    model = SpecialFiberModel.of([("gauss", 1, 1)], [1], 1)
    mu = shilov_measure(model)
    assert mu.weight("gauss") == 1
    assert mu.mass == 1


def test_two_component_arithmetic():
    model = SpecialFiberModel.of([("X1", 1, 3), ("X2", 2, 1)], [1], 5)
    mu = shilov_measure(model)
    assert mu.weight("X1") == 3
    assert mu.weight("X2") == 2
    assert mu.mass == 5


def test_exponents_divide_weights():
    model = SpecialFiberModel.of([("X1", 1, 6), ("X2", 3, 2)], [2, 3], 2)
    mu = shilov_measure(model)
    assert mu.weight("X1") == 1
    assert mu.weight("X2") == 1
    assert mu.mass == 2


def test_mass_mismatch_raises():
    model = SpecialFiberModel.of([("X1", 1, 3)], [1], 4)
    with pytest.raises(ModelInconsistencyError):
        shilov_measure(model)


def test_mass_law_randomized():
    rng = random.Random(17)
    for _ in range(100):
        exponents = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
        model = make_model(rng, exponents=exponents)
        mu = shilov_measure(model)
        scale = math.prod(exponents)
        assert mu.mass * scale == sum(
            F(c.multiplicity) * c.degree for c in model.components
        )
        assert mu.mass == model.total_degree


def test_positivity_for_nonnegative_degrees():
    rng = random.Random(19)
    for _ in range(25):
        model = make_model(rng)
        assert all(w >= 0 for _, w in shilov_measure(model).items())


def test_linearity_in_intersection_numbers():
    # fixing multiplicities and exponents, the measure is linear in the
    # per-component degree slot.
    mults = [2, 1, 3]
    degs_a = [F(1), F(2), F(0)]
    degs_b = [F(3, 2), F(0), F(5)]
    alpha, beta = F(2, 3), F(-1, 4)

    def model_for(degs):
        total = sum(F(m) * d for m, d in zip(mults, degs))
        return SpecialFiberModel.of(
            [(f"X{i}", m, d) for i, (m, d) in enumerate(zip(mults, degs))], [1], total
        )

    combo = [alpha * a + beta * b for a, b in zip(degs_a, degs_b)]
    mu_combo = shilov_measure(model_for(combo))
    mu_a = shilov_measure(model_for(degs_a))
    mu_b = shilov_measure(model_for(degs_b))
    expected = mu_a.scale(alpha) + mu_b.scale(beta)
    assert mu_combo == expected


def test_normalized_measure():
    model = SpecialFiberModel.of([("X1", 1, 3), ("X2", 2, 1)], [1], 5)
    mu = normalized_measure(model)
    assert mu.weight("X1") == F(3, 5)
    assert mu.weight("X2") == F(2, 5)
    assert mu.mass == 1
    single = SpecialFiberModel.of([("X", 4, "5/4")], [1], 5)
    assert normalized_measure(single).weight("X") == 1


def test_normalized_limit_weights_match_tube_formula():
    # weights multiplicity * degree / total, with the product of exponents
    # cancelling between numerator and the declared total.
    model = SpecialFiberModel.of([("Y1", 2, 6), ("Y2", 1, 3)], [3], 5)
    mu = normalized_measure(model)
    assert mu.weight("Y1") == F(2 * 6, 3) / 5
    assert mu.weight("Y2") == F(1 * 3, 3) / 5


def test_normalized_requires_positive_degree():
    flat = SpecialFiberModel.of([("X", 1, 0)], [1], 0)
    with pytest.raises(ZeroDegreeError):
        normalized_measure(flat)


def test_pushforward_identity_and_scaling():
    mu = DiscreteMeasure({"a": F(1, 2), "b": F(3)})
    assert pushforward(mu, 1, {"a": "a", "b": "b"}) == mu
    tripled = pushforward(DiscreteMeasure({"a": 2}), 3, {"a": "a"})
    assert tripled.weight("a") == 6


def test_pushforward_merges_labels():
    mu = DiscreteMeasure({"a": F(1, 2), "b": F(1, 3)})
    image = pushforward(mu, 1, {"a": "c", "b": "c"})
    assert image.items() == (("c", F(5, 6)),)


def test_pushforward_mass_scaling_randomized():
    rng = random.Random(23)
    for _ in range(30):
        labels = [f"x{i}" for i in range(rng.randint(1, 6))]
        mu = DiscreteMeasure({l: F(rng.randint(1, 9), rng.randint(1, 3)) for l in labels})
        deg = rng.randint(1, 5)
        relabel = {l: rng.choice(("u", "v", "w")) for l in labels}
        assert pushforward(mu, deg, relabel).mass == deg * mu.mass


def test_pushforward_missing_label_raises():
    with pytest.raises(LabelMapError):
        pushforward(DiscreteMeasure({"a": 1, "b": 1}), 2, {"a": "a"})


def test_product_binomial_weights():
    point = DiscreteMeasure({"x": 1})
    other = DiscreteMeasure({"y": 1})
    assert product_measure(point, 1, other, 1).weight(("x", "y")) == 2
    assert product_measure(point, 0, other, 3).weight(("x", "y")) == 1
    assert product_measure(point, 2, other, 1).weight(("x", "y")) == 3


def test_product_mass_and_pascal_recurrence():
    rng = random.Random(29)
    for d in range(0, 5):
        for e in range(0, 5):
            mu = DiscreteMeasure({f"a{i}": F(rng.randint(1, 4)) for i in range(2)})
            nu = DiscreteMeasure({f"b{i}": F(rng.randint(1, 4)) for i in range(2)})
            mass = product_measure(mu, d, nu, e).mass
            assert mass == math.comb(d + e, d) * mu.mass * nu.mass
    # Pascal: C(n, k) = C(n-1, k-1) + C(n-1, k), read off the product weights
    unit = DiscreteMeasure({"p": 1})
    for n in range(1, 9):
        for k in range(1, n):
            c = product_measure(unit, k, unit, n - k).weight(("p", "p"))
            c_left = product_measure(unit, k - 1, unit, n - k).weight(("p", "p"))
            c_right = product_measure(unit, k, unit, n - 1 - k).weight(("p", "p"))
            assert c == c_left + c_right


def test_model_validation_and_json():
    with pytest.raises(ValueError, match="distinct"):
        SpecialFiberModel.of([("X", 1, 1), ("X", 1, 1)], [1], 2)
    with pytest.raises(ValueError, match="multiplicity"):
        SpecialFiberModel.of([("X", 0, 1)], [1], 0)
    with pytest.raises(ValueError, match="exponents"):
        SpecialFiberModel.of([("X", 1, 1)], [0], 1)
    model = SpecialFiberModel.of([("X1", 1, "3/1")], [1], "3/1")
    assert SpecialFiberModel.from_dict(model.to_dict()) == model
