"""Bound families for H_n - ln n - gamma, the residual itself, and phi.

Three families of two-sided bounds are provided:

* ``franel``:    1/(2n) - 1/(8n^2)        <  r_n < 1/(2n)
* ``toth_mare``: 1/(2n + 2/5)            <  r_n < 1/(2n + 1/3)
* ``sharp``:     1/(2n + 1/(1-gamma) - 2) <= r_n < 1/(2n + 1/3)

where r_n = H_n - ln n - gamma.  The sharp constants are the extreme values
of phi(n) = 1/r_n - 2n: phi(1) = 1/(1-gamma) - 2 and lim phi = 1/3.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exact import harmonic_range, to_rational
from .psi import (
    PrecisionError,
    choose_euler_maclaurin,
    digamma_residual_enclosure,
    euler_maclaurin_tail,
)
from .realnum import DEFAULT_BITS, Interval, from_rational, ln_enclosure

__all__ = [
    "BoundFamily",
    "BoundPair",
    "franel_bounds",
    "toth_mare_bounds",
    "sharp_bounds",
    "sharp_constant",
    "bounds_for",
    "residual",
    "phi",
    "phi_from_residual",
    "phi_derivative_closed_form",
]

_MAX_GAMMA_WIDTH = Fraction(1, 1000)


class BoundFamily(str, Enum):
    FRANEL = "franel"
    TOTH_MARE = "toth_mare"
    SHARP = "sharp"


@dataclass(frozen=True)
class BoundPair:
    family: BoundFamily
    n: int
    lower: Interval
    upper: Interval
    lower_strict: bool
    upper_strict: bool

    def to_json(self, digits: int = 25) -> dict:
        return {
            "family": self.family.value,
            "n": self.n,
            "lower": self.lower.to_json(digits),
            "upper": self.upper.to_json(digits),
            "lower_strict": self.lower_strict,
            "upper_strict": self.upper_strict,
        }


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"n must be an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return n


def franel_bounds(n: int, precision_bits: int = DEFAULT_BITS) -> BoundPair:
    _check_n(n)
    lower = Fraction(1, 2 * n) - Fraction(1, 8 * n * n)
    upper = Fraction(1, 2 * n)
    return BoundPair(
        BoundFamily.FRANEL, n, from_rational(lower, precision_bits), from_rational(upper, precision_bits), True, True
    )


def toth_mare_bounds(n: int, precision_bits: int = DEFAULT_BITS) -> BoundPair:
    _check_n(n)
    lower = 1 / (2 * n + Fraction(2, 5))
    upper = 1 / (2 * n + Fraction(1, 3))
    return BoundPair(
        BoundFamily.TOTH_MARE, n, from_rational(lower, precision_bits), from_rational(upper, precision_bits), True, True
    )


def _check_gamma(gamma: Interval) -> None:
    if gamma.hi >= 1:
        raise ValueError("gamma enclosure must lie below 1")
    if gamma.width > _MAX_GAMMA_WIDTH:
        raise ValueError(f"gamma enclosure too wide ({float(gamma.width):.3g} > 1e-3)")


def sharp_constant(gamma: Interval) -> Interval:
    """1/(1 - gamma) - 2, propagated outward from the gamma enclosure."""
    _check_gamma(gamma)
    return (1 - gamma).recip() - 2


def sharp_bounds(n: int, gamma: Interval, precision_bits: int | None = None) -> BoundPair:
    """Best-constant bounds.  The lower one holds with equality at n = 1."""
    _check_n(n)
    bits = precision_bits or gamma.bits
    c = sharp_constant(gamma)
    lower = (c + 2 * n).recip()
    upper = from_rational(1 / (2 * n + Fraction(1, 3)), bits)
    return BoundPair(BoundFamily.SHARP, n, lower, upper, False, True)


def bounds_for(family, n: int, gamma: Interval | None = None, precision_bits: int = DEFAULT_BITS) -> BoundPair:
    family = BoundFamily(family)
    if family is BoundFamily.FRANEL:
        return franel_bounds(n, precision_bits)
    if family is BoundFamily.TOTH_MARE:
        return toth_mare_bounds(n, precision_bits)
    if gamma is None:
        raise ValueError("sharp bounds need a gamma enclosure")
    return sharp_bounds(n, gamma, precision_bits)


def residual(n: int, target_width="1e-20", precision_bits: int = DEFAULT_BITS) -> Interval:
    """Interval containing H_n - ln n - gamma, of width <= target_width.

    gamma is expanded at some n' >= n:
        gamma = H_{n'} - ln n' - E(n') + r,  |r| <= R(n'),
    so H_n - ln n - gamma = E(n') - (H_{n'} - H_n) + ln(n'/n) - r.  Writing it
    this way lets the large shared parts H_n and ln n cancel exactly instead
    of as two wide intervals.
    """
    _check_n(n)
    target = to_rational(target_width)
    if target <= 0:
        raise ValueError("target_width must be > 0")
    # leave 1/10 of the budget for rounding
    n2, q = choose_euler_maclaurin(n, target * Fraction(9, 10))
    e, r = euler_maclaurin_tail(n2, q)
    base = e - harmonic_range(n + 1, n2)
    value = Interval.hull(base - r, base + r, precision_bits)
    if n2 != n:
        value = value + ln_enclosure(Fraction(n2, n), precision_bits)
    if value.width > target:
        raise PrecisionError(f"residual({n}) width {float(value.width):.3g} misses target; raise precision_bits")
    return value


def phi_from_residual(x, d: Interval) -> Interval:
    """phi = 1/d - 2x for an enclosure d of psi(x+1) - ln x."""
    return d.recip() - 2 * to_rational(x)


def phi(x, target_width="1e-20", precision_bits: int = DEFAULT_BITS, *, lemma_coeff: Fraction | None = None) -> Interval:
    """Interval containing phi(x) = 1/(psi(x+1) - ln x) - 2x, width <= target_width."""
    x = to_rational(x)
    if x <= 0:
        raise ValueError(f"phi needs x > 0, got {x}")
    target = to_rational(target_width)
    if target <= 0:
        raise ValueError("target_width must be > 0")

    # coarse pass to get a positive lower bound on d
    w = min(target, Fraction(1, 100 * (2 * x + 1)))
    for _ in range(60):
        d = digamma_residual_enclosure(x, w, precision_bits, lemma_coeff=lemma_coeff).value
        if d.lo > 0:
            break
        w /= 16
    else:
        raise RuntimeError(f"digamma residual at x={x} is not certified positive")

    # reciprocal sensitivity: width(1/d) ~ width(d) / d^2
    w = target * d.lo * d.lo / 2
    for _ in range(8):
        d = digamma_residual_enclosure(x, w, precision_bits, lemma_coeff=lemma_coeff).value
        result = phi_from_residual(x, d)
        if result.width <= target:
            return result
        w /= 4
    raise PrecisionError(f"phi({x}) width {float(result.width):.3g} misses target; raise precision_bits")


def phi_derivative_closed_form(x) -> Fraction:
    """(12 - 5x) / (360 x^5), the bracket-level upper bound of (psi(x+1) - ln x)^2 phi'(x)."""
    x = to_rational(x)
    if x == 0:
        raise ValueError("x must be nonzero")
    return (12 - 5 * x) / (360 * x**5)
