"""Canonical local heights of polynomial maps at a finite place.

For a degree-b polynomial f over the rationals and a prime p, the
normalized local height of x is the escape rate

    lim_k b^(-k) * max(0, -v_p(f^k(x)))

in units of log p.  Once an orbit valuation drops below the map's escape
threshold, the leading term dominates every later iterate exactly and the
limit has a closed form, so the value is certified; orbits that never
certify within the iteration budget return their last finite-stage
estimate flagged as unconverged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import RationalLike, ZERO, as_rational


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def padic_valuation(x: RationalLike, p: int) -> int | None:
    """v_p of a rational, with None standing for +infinity at x == 0."""
    value = as_rational(x)
    if value == 0:
        return None

    def vp(n: int) -> int:
        n = abs(n)
        v = 0
        while n % p == 0:
            v += 1
            n //= p
        return v

    return vp(value.numerator) - vp(value.denominator)


@dataclass(frozen=True)
class PolyMap:
    """Polynomial with rational coefficients (leading first) at a prime p."""

    coefficients: tuple[Fraction, ...]
    prime: int

    def __post_init__(self) -> None:
        if len(self.coefficients) < 3:
            raise ValueError("the polynomial must have degree >= 2")
        if self.coefficients[0] == 0:
            raise ValueError("the leading coefficient must be nonzero")
        if not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @classmethod
    def of(cls, coefficients, prime: int) -> "PolyMap":
        return cls(tuple(as_rational(c) for c in coefficients), prime)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: Fraction) -> Fraction:
        value = ZERO
        for c in self.coefficients:
            value = value * x + c
        return value


@dataclass(frozen=True)
class LocalHeightValue:
    """Exact rational height in units of log p, with certification status."""

    value: Fraction
    converged: bool
    iterations: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("local heights are nonnegative")


def _escape_threshold(f: PolyMap) -> Fraction:
    """Largest valuation bound below which f multiplies valuations by its degree.

    If v_p(y) is below every (v(a_i) - v(a_b))/(b - i) the leading term of
    f(y) strictly dominates, and below -v(a_b)/(b - 1) the valuation also
    strictly decreases, so the whole forward orbit stays certified.
    """
    b = f.degree
    v_lead = padic_valuation(f.coefficients[0], f.prime)
    bounds = [Fraction(-v_lead, b - 1)]
    for gap, coefficient in enumerate(f.coefficients[1:], start=1):
        if coefficient != 0:
            v = padic_valuation(coefficient, f.prime)
            bounds.append(Fraction(v - v_lead, gap))
    return min(bounds)


def canonical_local_height(
    f: PolyMap, x: RationalLike, max_iter: int = 8
) -> LocalHeightValue:
    """Escape-rate local height of x under f, exact when certified.

    On certified escape at stage k the value is
    (-v_p(f^k(x)) - v_p(lead)/(b-1)) / b^k; maps with p-integral
    coefficients assign height zero to every p-integral point without
    iterating.
    """
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    point = as_rational(x)
    p = f.prime
    b = f.degree
    v_lead = padic_valuation(f.coefficients[0], p)
    coefficient_vals = [padic_valuation(c, p) for c in f.coefficients if c != 0]
    v_point = padic_valuation(point, p)
    if all(v >= 0 for v in coefficient_vals) and (v_point is None or v_point >= 0):
        return LocalHeightValue(ZERO, True, 0)

    threshold = _escape_threshold(f)
    tail = Fraction(v_lead, b - 1)
    current = point
    k = 0
    while True:
        v = padic_valuation(current, p)
        if v is not None and v < threshold:
            return LocalHeightValue((-v - tail) / b**k, True, k)
        if k == max_iter:
            estimate = max(ZERO, Fraction(-v)) / b**k if v is not None else ZERO
            return LocalHeightValue(estimate, False, k)
        current = f(current)
        k += 1
