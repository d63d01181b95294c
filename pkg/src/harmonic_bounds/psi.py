"""Certified enclosures of psi(x+1) - ln x, 1/x - psi'(x+1) and Euler's constant.

Brackets
--------
Write S_m(X) = 1/(2X) - sum_{i=1..m} B_{2i} / (2i X^{2i}).  For every X > 0 the
truncation errors of psi(X+1) - ln X against S_m alternate in sign (the
remainders are completely monotone), so psi(X+1) - ln X always lies between
S_{q-1}(X) and S_q(X).  Order q = 1 is the classical two-sided bracket

    1/(2X) - 1/(12X^2) < psi(X+1) - ln X < 1/(2X).

Likewise with T_m(X) = 1/(2X^2) - sum_{i=1..m} B_{2i} / X^{2i+1}, the value
1/X - psi'(X+1) lies between T_q(X) and T_{q+1}(X); order 1 is

    1/(2X^2) - 1/(6X^3) < 1/X - psi'(X+1) < 1/(2X^2) - 1/(6X^3) + 1/(30X^5).

A bracket at X = x + k is carried back to x with the recurrences
psi(y+1) = psi(y) + 1/y and psi'(y+1) = psi'(y) - 1/y^2, whose correction
terms are exact rationals (plus one logarithm for the digamma case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import bernoulli_number, harmonic_exact, to_rational
from .realnum import DEFAULT_BITS, Interval, from_rational, ln_enclosure

__all__ = [
    "PrecisionError",
    "PsiEnclosure",
    "digamma_bracket",
    "trigamma_bracket",
    "digamma_bracket_width",
    "trigamma_bracket_width",
    "shifted_digamma_residual",
    "shifted_trigamma_residual",
    "digamma_residual_enclosure",
    "trigamma_residual_enclosure",
    "euler_gamma_enclosure",
    "gamma_enclosure",
    "LEMMA_COEFF",
]

LEMMA_COEFF = Fraction(1, 12)
MAX_ORDER = 40
MAX_SHIFT = 200_000
# relative cost of one ln evaluation, in units of one shift step
_LN_COST = 25


class PrecisionError(ValueError):
    """precision_bits too small for the requested width."""


@dataclass(frozen=True)
class PsiEnclosure:
    value: Interval
    shift_k: int
    method: str  # "lemma_bracket" or "euler_maclaurin"
    order_q: Optional[int] = None
    # width of the mathematical bracket before rounding
    bracket_width: Fraction = Fraction(0)

    def to_json(self, digits: int = 25) -> dict:
        return {
            "value": self.value.to_json(digits),
            "shift_k": self.shift_k,
            "method": self.method,
            "order_q": self.order_q,
        }


def _method(q: int) -> str:
    return "lemma_bracket" if q == 1 else "euler_maclaurin"


def _digamma_partial(X: Fraction, m: int) -> Fraction:
    s = 1 / (2 * X)
    for i in range(1, m + 1):
        s -= bernoulli_number(2 * i) / (2 * i * X ** (2 * i))
    return s


def _trigamma_partial(X: Fraction, m: int) -> Fraction:
    s = 1 / (2 * X * X)
    for i in range(1, m + 1):
        s -= bernoulli_number(2 * i) / X ** (2 * i + 1)
    return s


def digamma_bracket(X, q: int = 1, lemma_coeff: Fraction | None = None) -> tuple[Fraction, Fraction]:
    """Rational (lo, hi) with lo <= psi(X+1) - ln X <= hi.

    ``lemma_coeff`` replaces the 1/12 of the order-1 bracket; it exists so the
    verification suites can be run against deliberately broken brackets.
    """
    X = to_rational(X)
    if X <= 0:
        raise ValueError("bracket needs X > 0")
    if q < 1:
        raise ValueError("order q must be >= 1")
    if lemma_coeff is not None:
        if q != 1:
            raise ValueError("lemma_coeff only applies to order 1")
        return 1 / (2 * X) - lemma_coeff / (X * X), 1 / (2 * X)
    a, b = _digamma_partial(X, q - 1), _digamma_partial(X, q)
    return (a, b) if a <= b else (b, a)


def trigamma_bracket(X, q: int = 1) -> tuple[Fraction, Fraction]:
    """Rational (lo, hi) with lo <= 1/X - psi'(X+1) <= hi."""
    X = to_rational(X)
    if X <= 0:
        raise ValueError("bracket needs X > 0")
    if q < 1:
        raise ValueError("order q must be >= 1")
    a, b = _trigamma_partial(X, q), _trigamma_partial(X, q + 1)
    return (a, b) if a <= b else (b, a)


def digamma_bracket_width(X, q: int, lemma_coeff: Fraction | None = None) -> Fraction:
    X = to_rational(X)
    if lemma_coeff is not None:
        return lemma_coeff / (X * X)
    return abs(bernoulli_number(2 * q)) / (2 * q * X ** (2 * q))


def trigamma_bracket_width(X, q: int) -> Fraction:
    X = to_rational(X)
    return abs(bernoulli_number(2 * q + 2)) / X ** (2 * q + 3)


def _log(r: Fraction) -> float:
    return math.log(r.numerator) - math.log(r.denominator)


def _min_shift(x: Fraction, width_of, target: Fraction, power: int, coeff: Fraction) -> int:
    """Smallest k >= 0 with width_of(x + k) <= target, for width ~ coeff / X**power."""
    if coeff == 0:
        return 0
    log_x_min = (_log(coeff) - _log(target)) / power
    if log_x_min <= _log(x):
        k = 0
    elif log_x_min > math.log(4 * MAX_SHIFT):
        # hopeless for this order; report it as too large without iterating
        return 4 * MAX_SHIFT + 1
    else:
        k = max(0, math.floor(math.exp(log_x_min) - float(x)) - 2)
    while width_of(x + k) > target:
        k += 1
    return k


def _choose(x: Fraction, target: Fraction, kind: str, order, lemma_coeff, ln_cost: int) -> tuple[int, int]:
    if lemma_coeff is not None:
        orders = [1]
    elif order is not None:
        orders = [order]
    else:
        orders = range(1, MAX_ORDER + 1)
    best = None
    for q in orders:
        if kind == "digamma":
            coeff = lemma_coeff if lemma_coeff is not None else abs(bernoulli_number(2 * q)) / (2 * q)
            k = _min_shift(x, lambda X: digamma_bracket_width(X, q, lemma_coeff), target, 2 * q, coeff)
        else:
            coeff = abs(bernoulli_number(2 * q + 2))
            k = _min_shift(x, lambda X: trigamma_bracket_width(X, q), target, 2 * q + 3, coeff)
        cost = k + 2 * q + (ln_cost if k else 0)
        if best is None or cost < best[0]:
            best = (cost, k, q)
        if k == 0:
            break
    _, k, q = best
    if k > MAX_SHIFT:
        raise ValueError(f"order {q} would need a shift of {k} (> {MAX_SHIFT}); allow a higher order")
    return k, q


def _reciprocal_sum(x: Fraction, k: int, power: int) -> Fraction:
    # sum_{j=1..k} 1/(x+j)**power, exact
    s = Fraction(0)
    for j in range(1, k + 1):
        s += 1 / (x + j) ** power
    return s


def shifted_digamma_residual(
    x, k: int, q: int = 1, precision_bits: int = DEFAULT_BITS, lemma_coeff: Fraction | None = None
) -> PsiEnclosure:
    """Enclose psi(x+1) - ln x via the order-q bracket at X = x + k.

    psi(x+1) - ln x = [psi(X+1) - ln X] + ln(X/x) - sum_{j=1..k} 1/(x+j)
    """
    x = to_rational(x)
    if x <= 0:
        raise ValueError(f"digamma residual needs x > 0, got {x}")
    if k < 0:
        raise ValueError("shift must be >= 0")
    X = x + k
    lo, hi = digamma_bracket(X, q, lemma_coeff)
    s = _reciprocal_sum(x, k, 1)
    value = Interval.hull(lo - s, hi - s, precision_bits)
    if k:
        value = value + ln_enclosure(X / x, precision_bits)
    method = "lemma_bracket" if lemma_coeff is not None else _method(q)
    return PsiEnclosure(value, k, method, q, hi - lo)


def shifted_trigamma_residual(x, k: int, q: int = 1, precision_bits: int = DEFAULT_BITS) -> PsiEnclosure:
    """Enclose 1/x - psi'(x+1) via the order-q bracket at X = x + k.

    1/x - psi'(x+1) = [1/X - psi'(X+1)] + (1/x - 1/X) - sum_{j=1..k} 1/(x+j)^2
    """
    x = to_rational(x)
    if x <= 0:
        raise ValueError(f"trigamma residual needs x > 0, got {x}")
    if k < 0:
        raise ValueError("shift must be >= 0")
    X = x + k
    lo, hi = trigamma_bracket(X, q)
    c = 1 / x - 1 / X - _reciprocal_sum(x, k, 2)
    return PsiEnclosure(Interval.hull(lo + c, hi + c, precision_bits), k, _method(q), q, hi - lo)


def _check_target(target_width) -> Fraction:
    target = to_rational(target_width)
    if target <= 0:
        raise ValueError("target_width must be > 0")
    return target


def _check_slack(enc: PsiEnclosure, target: Fraction, precision_bits: int) -> PsiEnclosure:
    slack = enc.value.width - enc.bracket_width
    if slack > target / 10:
        raise PrecisionError(
            f"rounding slack {float(slack):.3g} exceeds 10% of target width {float(target):.3g} "
            f"at {precision_bits} bits; raise precision_bits"
        )
    return enc


def digamma_residual_enclosure(
    x,
    target_width,
    precision_bits: int = DEFAULT_BITS,
    *,
    order: int | None = None,
    lemma_coeff: Fraction | None = None,
) -> PsiEnclosure:
    """Interval containing psi(x+1) - ln x of width <= target_width (+ <=10% rounding slack).

    The shift k and bracket order q are chosen to minimise work; ``order=1``
    restricts to the classical bracket (which needs k ~ 1/sqrt(12 w)).
    """
    x = to_rational(x)
    if x <= 0:
        raise ValueError(f"digamma residual needs x > 0, got {x}")
    target = _check_target(target_width)
    k, q = _choose(x, target, "digamma", order, lemma_coeff, _LN_COST)
    enc = shifted_digamma_residual(x, k, q, precision_bits, lemma_coeff)
    return _check_slack(enc, target, precision_bits)


def trigamma_residual_enclosure(
    x, target_width, precision_bits: int = DEFAULT_BITS, *, order: int | None = None
) -> PsiEnclosure:
    """Interval containing 1/x - psi'(x+1) of width <= target_width (+ <=10% rounding slack)."""
    x = to_rational(x)
    if x <= 0:
        raise ValueError(f"trigamma residual needs x > 0, got {x}")
    target = _check_target(target_width)
    k, q = _choose(x, target, "trigamma", order, None, 0)
    enc = shifted_trigamma_residual(x, k, q, precision_bits)
    return _check_slack(enc, target, precision_bits)


def euler_maclaurin_tail(n: int, q: int) -> tuple[Fraction, Fraction]:
    """(E, R): H_n - ln n - gamma = E + r with |r| <= R.

    E = 1/(2n) - sum_{i<q} B_{2i}/(2i n^{2i}),  R = |B_{2q}| / (2q n^{2q}).
    """
    n_ = Fraction(n)
    return _digamma_partial(n_, q - 1), abs(bernoulli_number(2 * q)) / (2 * q * n_ ** (2 * q))


def euler_gamma_enclosure(n: int, q: int, precision_bits: int = DEFAULT_BITS) -> PsiEnclosure:
    """gamma = H_n - ln n - 1/(2n) + sum_{i<q} B_{2i}/(2i n^{2i}) + r,  |r| <= |B_{2q}|/(2q n^{2q})."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"euler_gamma_enclosure needs integer n >= 1, got {n!r}")
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise ValueError(f"euler_gamma_enclosure needs integer q >= 1, got {q!r}")
    e, r = euler_maclaurin_tail(n, q)
    base = harmonic_exact(n) - e
    value = Interval.hull(base - r, base + r, precision_bits) - ln_enclosure(n, precision_bits)
    return PsiEnclosure(value, 0, "euler_maclaurin", q, 2 * r)


def choose_euler_maclaurin(n: int, target: Fraction, max_order: int = MAX_ORDER) -> tuple[int, int]:
    """Smallest-cost (n' >= n, q) whose symmetric remainder 2R(n', q) <= target."""
    best = None
    for q in range(1, max_order + 1):
        coeff = 2 * abs(bernoulli_number(2 * q)) / (2 * q)
        k = _min_shift(Fraction(n), lambda X: coeff / X ** (2 * q), target, 2 * q, coeff)
        cost = k + 2 * q + (_LN_COST if k else 0)
        if best is None or cost < best[0]:
            best = (cost, n + k, q)
        if k == 0:
            break
    return best[1], best[2]


def gamma_enclosure(target_width="1e-30", precision_bits: int = DEFAULT_BITS) -> PsiEnclosure:
    """Euler's constant with (n, q) picked automatically for the target width."""
    target = _check_target(target_width)
    n, q = choose_euler_maclaurin(1, target)
    return euler_gamma_enclosure(n, q, precision_bits)
