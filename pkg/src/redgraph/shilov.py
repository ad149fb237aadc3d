"""Dirac measures attached to special-fiber model data.

A model is described purely numerically: component labels with their
multiplicities, one positive exponent per bundle factor, the per-component
intersection numbers, and the declared total degree.  The measure puts
weight multiplicity * degree / (product of exponents) on each component
label; consistency forces its mass to equal the declared degree.
Intersection numbers are inputs, never computed here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .core import RationalLike, ZERO, as_rational, rational_str
from .errors import LabelMapError, ModelInconsistencyError, ZeroDegreeError

Label = Hashable


class DiscreteMeasure:
    """Finitely supported measure on opaque labels; zero weights dropped."""

    __slots__ = ("_weights",)

    def __init__(
        self,
        weights: Mapping[Label, RationalLike] | Iterable[tuple[Label, RationalLike]] = (),
    ) -> None:
        items = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[Label, Fraction] = {}
        for label, weight in items:
            acc[label] = acc.get(label, ZERO) + as_rational(weight)
        self._weights = {
            label: w for label, w in sorted(acc.items(), key=lambda kv: repr(kv[0])) if w != 0
        }

    @property
    def mass(self) -> Fraction:
        return sum(self._weights.values(), ZERO)

    def weight(self, label: Label) -> Fraction:
        return self._weights.get(label, ZERO)

    def labels(self) -> tuple[Label, ...]:
        return tuple(self._weights)

    def items(self) -> tuple[tuple[Label, Fraction], ...]:
        return tuple(self._weights.items())

    def __len__(self) -> int:
        return len(self._weights)

    def __bool__(self) -> bool:
        return bool(self._weights)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiscreteMeasure) and self._weights == other._weights

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        merged = dict(self._weights)
        for label, w in other._weights.items():
            merged[label] = merged.get(label, ZERO) + w
        return DiscreteMeasure(merged)

    def scale(self, factor: RationalLike) -> "DiscreteMeasure":
        c = as_rational(factor)
        return DiscreteMeasure({label: c * w for label, w in self._weights.items()})

    def to_dict(self) -> dict:
        return {str(label): rational_str(w) for label, w in self._weights.items()}

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DiscreteMeasure({self._weights!r})"


@dataclass(frozen=True)
class FiberComponent:
    """One special-fiber component: label, multiplicity, intersection number."""

    label: str
    multiplicity: int
    degree: Fraction

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {self.multiplicity}")


@dataclass(frozen=True)
class SpecialFiberModel:
    """Numerical data of a model: components, exponents, declared degree."""

    components: tuple[FiberComponent, ...]
    exponents: tuple[int, ...]
    total_degree: Fraction

    def __post_init__(self) -> None:
        labels = [c.label for c in self.components]
        if len(set(labels)) != len(labels):
            raise ValueError("component labels must be distinct")
        if any(e < 1 for e in self.exponents):
            raise ValueError("exponents must be >= 1")

    @classmethod
    def of(
        cls,
        components: Iterable[tuple[str, int, RationalLike]],
        exponents: Iterable[int],
        total_degree: RationalLike,
    ) -> "SpecialFiberModel":
        return cls(
            tuple(FiberComponent(label, mult, as_rational(deg)) for label, mult, deg in components),
            tuple(exponents),
            as_rational(total_degree),
        )

    def to_dict(self) -> dict:
        return {
            "components": [
                {"label": c.label, "mult": c.multiplicity, "deg": rational_str(c.degree)}
                for c in self.components
            ],
            "exponents": list(self.exponents),
            "total_degree": rational_str(self.total_degree),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SpecialFiberModel":
        return cls.of(
            [(c["label"], c["mult"], c["deg"]) for c in data["components"]],
            data["exponents"],
            data["total_degree"],
        )

    @classmethod
    def from_json(cls, text: str) -> "SpecialFiberModel":
        return cls.from_dict(json.loads(text))


def shilov_measure(model: SpecialFiberModel) -> DiscreteMeasure:
    """Dirac weights multiplicity * degree / (product of exponents).

    The mass must equal the declared total degree; a mismatch means the
    model data is inconsistent and raises.
    """
    scale = math.prod(model.exponents, start=1)
    measure = DiscreteMeasure(
        {c.label: Fraction(c.multiplicity) * c.degree / scale for c in model.components}
    )
    if measure.mass != model.total_degree:
        raise ModelInconsistencyError(
            f"measure mass {measure.mass} does not match declared degree {model.total_degree}"
        )
    return measure


def normalized_measure(model: SpecialFiberModel) -> DiscreteMeasure:
    """The model's measure scaled to total mass exactly 1."""
    if model.total_degree <= 0:
        raise ZeroDegreeError(
            f"cannot normalize: total degree {model.total_degree} is not positive"
        )
    return shilov_measure(model).scale(Fraction(1) / model.total_degree)


def pushforward(
    measure: DiscreteMeasure, map_degree: int, relabeling: Mapping[Label, Label]
) -> DiscreteMeasure:
    """Transport weights along ``relabeling`` and multiply by ``map_degree``.

    Labels merged by the relabeling sum their weights, so the total mass is
    multiplied by exactly ``map_degree``.
    """
    if map_degree < 1:
        raise ValueError(f"map degree must be >= 1, got {map_degree}")
    missing = [label for label in measure.labels() if label not in relabeling]
    if missing:
        raise LabelMapError(f"relabeling misses support labels: {missing}")
    acc: dict[Label, Fraction] = {}
    for label, w in measure.items():
        image = relabeling[label]
        acc[image] = acc.get(image, ZERO) + map_degree * w
    return DiscreteMeasure(acc)


def product_measure(
    mu_x: DiscreteMeasure, dim_x: int, mu_y: DiscreteMeasure, dim_y: int
) -> DiscreteMeasure:
    """Measure on pair labels with the binomial product weights.

    The weight at (a, b) is C(dim_x + dim_y, dim_x) * mu_x(a) * mu_y(b), so
    the mass is the binomial coefficient times the product of the masses.
    """
    if dim_x < 0 or dim_y < 0:
        raise ValueError("dimensions must be nonnegative")
    binom = math.comb(dim_x + dim_y, dim_x)
    return DiscreteMeasure(
        {
            (label_x, label_y): binom * wx * wy
            for label_x, wx in mu_x.items()
            for label_y, wy in mu_y.items()
        }
    )
