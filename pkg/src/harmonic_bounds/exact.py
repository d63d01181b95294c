"""Exact rational arithmetic: harmonic numbers, Bernoulli numbers and polynomials.

Everything here returns :class:`fractions.Fraction`, which is already kept in
canonical form (gcd(|p|, q) = 1, q > 0).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

Rational = Fraction

__all__ = [
    "Rational",
    "harmonic_exact",
    "harmonic_range",
    "bernoulli_number",
    "bernoulli_polynomial",
    "to_rational",
    "rational_str",
]


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and decimal/fraction strings ("1e-20", "7/3") exactly.

    Floats are refused: a float literal is almost never the number the caller meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"expected int, Fraction or str, got {type(value).__name__}")


def rational_str(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def _split_sum(a: int, b: int) -> tuple[int, int]:
    # unreduced p/q = sum_{i=a}^{b-1} 1/i by binary splitting
    if b - a == 1:
        return 1, a
    if b - a == 2:
        return 2 * a + 1, a * (a + 1)
    m = (a + b) // 2
    p1, q1 = _split_sum(a, m)
    p2, q2 = _split_sum(m, b)
    return p1 * q2 + p2 * q1, q1 * q2


def harmonic_range(a: int, b: int) -> Fraction:
    """Return sum_{i=a}^{b} 1/i (zero when b < a)."""
    if a < 1:
        raise ValueError("harmonic_range needs a >= 1")
    if b < a:
        return Fraction(0)
    p, q = _split_sum(a, b + 1)
    return Fraction(p, q)


def harmonic_exact(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n as an exact fraction.

    Uses balanced splitting so the single gcd happens at the end on the full
    numerator/denominator instead of once per term.
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("n must be an int")
    if n < 1:
        raise ValueError(f"harmonic_exact needs n >= 1, got {n}")
    return harmonic_range(1, n)


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(-1, 2)
    if m % 2:
        return Fraction(0)
    # sum_{k=0}^{m} C(m+1, k) B_k = 0
    acc = Fraction(0)
    for k in range(m):
        bk = _bernoulli(k)
        if bk:
            acc += comb(m + 1, k) * bk
    return -acc / (m + 1)


def bernoulli_number(m: int) -> Fraction:
    """Bernoulli number B_m with the convention B_1 = -1/2."""
    if isinstance(m, bool) or not isinstance(m, int):
        raise TypeError("m must be an int")
    if m < 0:
        raise ValueError(f"bernoulli_number needs m >= 0, got {m}")
    # warm the cache bottom-up so deep indices never recurse far
    for k in range(0, m, 32):
        _bernoulli(k)
    return _bernoulli(m)


def bernoulli_polynomial(m: int, x) -> Fraction:
    """B_m(x) = sum_k C(m, k) B_k x^(m-k)."""
    if m < 0:
        raise ValueError(f"bernoulli_polynomial needs m >= 0, got {m}")
    x = to_rational(x)
    total = Fraction(0)
    for k in range(m + 1):
        bk = bernoulli_number(k)
        if bk:
            total += comb(m, k) * bk * x ** (m - k)
    return total
