"""Height lower bounds from quadratic bump functions on a circle.

Given a circle of circumference L and a complement made of disjoint open
intervals (a_i, b_i), the bump vanishing off the intervals and equal to
c_i*(t - a_i)*(b_i - t) on each of them produces the exact lower-bound
coefficient

    sum_i (b_i - a_i)^3 * c_i * (1 - L*c_i) / (6*L)

of log N_v for the degree-one invariant-curvature bundle; the optimal
choice c_i = 1/(2L) turns this into sum_i (b_i - a_i)^3 / (24*L^2).  The
generic ``lower_bound`` works for any bundle of positive degree on any
graph; the closed forms and presets pin the circle cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .bundles import MetrizedBundle, curvature
from .core import (
    PiecewisePoly,
    RationalLike,
    ZERO,
    as_rational,
    circle_graph,
    integrate,
)
from .errors import ZeroDegreeError
from .potential import energy


@dataclass(frozen=True)
class IntervalComplement:
    """Circle of circumference ``ell`` minus disjoint open intervals.

    The intervals are where bump functions may live; the closed complement
    is the region test sequences are confined to.  Ordering must satisfy
    0 <= a_1 < b_1 <= a_2 < ... <= a_t < b_t <= ell.
    """

    ell: Fraction
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if self.ell <= 0:
            raise ValueError(f"circle length must be positive, got {self.ell}")
        cursor = ZERO
        for a, b in self.intervals:
            if a < cursor or not a < b:
                raise ValueError(
                    f"intervals must be disjoint, ordered and nondegenerate: ({a}, {b})"
                )
            cursor = b
        if self.intervals and cursor > self.ell:
            raise ValueError(f"intervals must stay inside [0, {self.ell}]")

    @classmethod
    def of(
        cls, ell: RationalLike, intervals: Iterable[tuple[RationalLike, RationalLike]]
    ) -> "IntervalComplement":
        return cls(
            as_rational(ell),
            tuple((as_rational(a), as_rational(b)) for a, b in intervals),
        )


@dataclass(frozen=True)
class BumpSpec:
    """Interval complement plus one bump coefficient per interval."""

    complement: IntervalComplement
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != len(self.complement.intervals):
            raise ValueError("one coefficient per interval is required")

    @classmethod
    def default(cls, complement: IntervalComplement) -> "BumpSpec":
        """Optimal coefficients c_i = 1/(2*ell) on every interval."""
        c = Fraction(1, 2) / complement.ell
        return cls(complement, (c,) * len(complement.intervals))

    @classmethod
    def of(
        cls, complement: IntervalComplement, coefficients: Iterable[RationalLike]
    ) -> "BumpSpec":
        return cls(complement, tuple(as_rational(c) for c in coefficients))


def optimal_bump(spec: BumpSpec) -> PiecewisePoly:
    """The continuous bump: c_i*(t - a_i)*(b_i - t) on each interval, 0 off them."""
    comp = spec.complement
    graph = circle_graph(comp.ell)
    flat = (ZERO, ZERO, ZERO)
    pieces: list[tuple[Fraction, tuple[Fraction, Fraction, Fraction]]] = []
    cursor = ZERO
    for (a, b), c in zip(comp.intervals, spec.coefficients):
        if a > cursor:
            pieces.append((cursor, flat))
        pieces.append((a, (-c, c * (a + b), -c * a * b)))
        cursor = b
    if cursor < comp.ell or not pieces:
        pieces.append((cursor, flat))
    breakpoints = tuple(start for start, _ in pieces[1:])
    coeffs = tuple(piece for _, piece in pieces)
    return PiecewisePoly(graph, {0: (breakpoints, coeffs)})


def lower_bound(bundle: MetrizedBundle, phi: PiecewisePoly) -> Fraction:
    """Exact lower-bound coefficient of log N_v from the twist phi.

    Curvature average of phi minus energy(phi)/(2*deg); the height of the
    ambient variety itself is not included.
    """
    deg = bundle.degree
    if deg <= 0:
        raise ZeroDegreeError(f"bundle degree must be positive, got {deg}")
    return integrate(phi, curvature(bundle)) / deg - energy(phi) / (2 * deg)


def closed_form_bound(complement: IntervalComplement) -> Fraction:
    """sum (b_i - a_i)^3 / (24*ell^2): the bound at the optimal coefficients."""
    total = sum(((b - a) ** 3 for a, b in complement.intervals), ZERO)
    return total / (24 * complement.ell**2)


def coefficient_objective(c: RationalLike, ell: RationalLike) -> Fraction:
    """Per-interval objective c*(1 - ell*c) whose maximum sets the bound."""
    cc = as_rational(c)
    return cc * (1 - as_rational(ell) * cc)


def optimize_coefficient(
    interval_length: RationalLike, ell: RationalLike
) -> tuple[Fraction, Fraction]:
    """Maximizer of the per-interval objective and its value: (1/(2L), 1/(4L)).

    The maximizer does not depend on the interval length; the length only
    scales the resulting bound contribution by (b - a)^3 / (6L).
    """
    d = as_rational(interval_length)
    length = as_rational(ell)
    if d <= 0 or length <= 0:
        raise ValueError("interval length and circle length must be positive")
    best = Fraction(1, 2) / length
    return best, coefficient_objective(best, length)


def preset_complement(name: str, ell: RationalLike) -> IntervalComplement:
    """Named interval configurations on a circle of circumference ``ell``.

    neutral: one interval (0, ell), confining sequences to a single point.
    neron:   ell unit intervals (integer ell), one per integral translate.
    point:   one unit interval (0, 1), avoiding a single marked point.
    """
    length = as_rational(ell)
    if name == "neutral":
        return IntervalComplement.of(length, [(ZERO, length)])
    if name == "neron":
        if length.denominator != 1 or length < 1:
            raise ValueError(f"the neron preset needs a positive integer length, got {length}")
        return IntervalComplement.of(length, [(i, i + 1) for i in range(int(length))])
    if name == "point":
        if length < 1:
            raise ValueError(f"the point preset needs length >= 1, got {length}")
        return IntervalComplement.of(length, [(ZERO, Fraction(1))])
    raise ValueError(f"unknown preset {name!r}; use neutral, neron or point")
