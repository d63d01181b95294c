"""Outward-rounded intervals with dyadic endpoints, and a certified logarithm.

Endpoints are :class:`~fractions.Fraction` values whose denominators are powers
of two and whose numerators fit in ``bits`` significant bits.  Every operation
computes the exact rational image of the endpoints and then rounds the lower
end toward -inf and the upper end toward +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import to_rational

__all__ = [
    "Interval",
    "IntervalDivisionError",
    "round_down",
    "round_up",
    "from_rational",
    "interval_arith",
    "ln_enclosure",
    "decimal_string",
    "DEFAULT_BITS",
]

DEFAULT_BITS = 128


class IntervalDivisionError(ZeroDivisionError):
    """Divisor interval contains zero."""


def _floor_log2(r: Fraction) -> int:
    # e with 2**e <= |r| < 2**(e+1), r != 0
    p, q = abs(r.numerator), r.denominator
    e = p.bit_length() - q.bit_length()
    if e >= 0:
        if p < (q << e):
            e -= 1
    elif (p << -e) < q:
        e -= 1
    return e


def _round(r: Fraction, bits: int, up: bool) -> Fraction:
    if r == 0:
        return r
    p, q = r.numerator, r.denominator
    if q & (q - 1) == 0 and abs(p).bit_length() <= bits:
        return r
    shift = bits - 1 - _floor_log2(r)
    if shift >= 0:
        num, den = p << shift, q
    else:
        num, den = p, q << -shift
    m = -((-num) // den) if up else num // den
    if shift >= 0:
        return Fraction(m, 1 << shift)
    return Fraction(m << -shift)


def round_down(r: Fraction, bits: int) -> Fraction:
    """Largest dyadic with ``bits`` significant bits that is <= r."""
    return _round(r, bits, up=False)


def round_up(r: Fraction, bits: int) -> Fraction:
    """Smallest dyadic with ``bits`` significant bits that is >= r."""
    return _round(r, bits, up=True)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if not isinstance(self.lo, Fraction) or not isinstance(self.hi, Fraction):
            raise TypeError("interval endpoints must be Fractions")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.bits < 2:
            raise ValueError("bits must be >= 2")

    @classmethod
    def point(cls, r, bits: int = DEFAULT_BITS) -> "Interval":
        return from_rational(r, bits)

    @classmethod
    def hull(cls, lo, hi, bits: int = DEFAULT_BITS) -> "Interval":
        """Outward-rounded enclosure of the rational segment [lo, hi]."""
        lo, hi = to_rational(lo), to_rational(hi)
        return cls(round_down(lo, bits), round_up(hi, bits), bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = to_rational(x)
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        if not self.overlaps(other):
            raise ValueError("intervals are disjoint")
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi), max(self.bits, other.bits))

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        r = to_rational(other)
        # exact (possibly non-dyadic) point; the result gets rounded anyway
        return Interval(r, r, self.bits)

    def _make(self, lo: Fraction, hi: Fraction, other: "Interval") -> "Interval":
        bits = max(self.bits, other.bits)
        return Interval(round_down(lo, bits), round_up(hi, bits), bits)

    def __add__(self, other):
        other = self._coerce(other)
        return self._make(self.lo + other.lo, self.hi + other.hi, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self._make(self.lo - other.hi, self.hi - other.lo, other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.bits)

    def __mul__(self, other):
        other = self._coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return self._make(min(products), max(products), other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.lo <= 0 <= other.hi:
            raise IntervalDivisionError(f"division by interval containing 0: [{other.lo}, {other.hi}]")
        quotients = (self.lo / other.lo, self.lo / other.hi, self.hi / other.lo, self.hi / other.hi)
        return self._make(min(quotients), max(quotients), other)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def recip(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise IntervalDivisionError(f"reciprocal of interval containing 0: [{self.lo}, {self.hi}]")
        return Interval(round_down(1 / self.hi, self.bits), round_up(1 / self.lo, self.bits), self.bits)

    def square(self) -> "Interval":
        """Tight square (the product form overestimates when 0 is inside)."""
        if self.lo >= 0:
            lo, hi = self.lo * self.lo, self.hi * self.hi
        elif self.hi <= 0:
            lo, hi = self.hi * self.hi, self.lo * self.lo
        else:
            lo, hi = Fraction(0), max(self.lo * self.lo, self.hi * self.hi)
        return Interval(round_down(lo, self.bits), round_up(hi, self.bits), self.bits)

    # serialization ------------------------------------------------------

    def to_json(self, digits: int = 25) -> dict:
        return {
            "lo": decimal_string(self.lo, digits, up=False),
            "hi": decimal_string(self.hi, digits, up=True),
            "bits": self.bits,
        }

    def __repr__(self) -> str:
        return f"Interval[{decimal_string(self.lo, 20)}, {decimal_string(self.hi, 20, up=True)}]"


def from_rational(r, bits: int = DEFAULT_BITS) -> Interval:
    """Tightest dyadic enclosure of r at ``bits`` significant bits."""
    r = to_rational(r)
    return Interval(round_down(r, bits), round_up(r, bits), bits)


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "neg": lambda a, b: -a,
    "recip": lambda a, b: a.recip(),
}


def interval_arith(a: Interval, b: Interval | None, op: str) -> Interval:
    """Apply one of add/sub/mul/div/neg/recip; ``b`` is ignored for unary ops."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown interval op {op!r}") from None
    if b is None and op not in ("neg", "recip"):
        raise ValueError(f"{op} needs two operands")
    return fn(a, b)


# logarithm -------------------------------------------------------------


def _atanh_fixed(a: int, b: int, w: int) -> tuple[int, int]:
    """Bounds [L, U] with L <= 2**w * atanh(a/b) <= U, for 0 <= a/b <= 1/3."""
    if a == 0:
        return 0, 0
    y_lo = (a << w) // b
    y_hi = -((-(a << w)) // b)
    y2_lo = (y_lo * y_lo) >> w
    y2_hi = -((-(y_hi * y_hi)) >> w)
    p_lo, p_hi = y_lo, y_hi
    s_lo = s_hi = 0
    j = 0
    while True:
        d = 2 * j + 1
        s_lo += p_lo // d
        s_hi += -((-p_hi) // d)
        j += 1
        p_lo = (p_lo * y2_lo) >> w
        p_hi = -((-(p_hi * y2_hi)) >> w)
        if p_hi <= d:
            break
    # tail: sum_{i>=j} y^(2i+1)/(2i+1) <= y^(2j+1) / ((2j+1)(1 - y^2))
    d = 2 * j + 1
    tail = -((-(p_hi * b * b)) // (d * (b * b - a * a)))
    return s_lo, s_hi + tail


@lru_cache(maxsize=64)
def _ln2_fixed(w: int) -> tuple[int, int]:
    lo, hi = _atanh_fixed(1, 3, w)
    return 2 * lo, 2 * hi


def ln_enclosure(x, precision_bits: int = DEFAULT_BITS) -> Interval:
    """Interval containing ln x.

    x = 2**k * m with m in [2/3, 4/3]; ln m = 2 atanh((m-1)/(m+1)) summed in
    fixed point with separately floored/ceiled partial sums, plus k copies of
    ln 2 = 2 atanh(1/3).
    """
    x = to_rational(x)
    if x <= 0:
        raise ValueError(f"ln_enclosure needs x > 0, got {x}")
    if precision_bits < 2:
        raise ValueError("precision_bits must be >= 2")
    if x == 1:
        return Interval(Fraction(0), Fraction(0), precision_bits)
    k = _floor_log2(x * Fraction(3, 2))
    m = x / 2**k if k >= 0 else x * 2**-k
    y = (m - 1) / (m + 1)
    w = precision_bits + 16 + abs(k).bit_length() + precision_bits.bit_length()
    a, b = abs(y.numerator), y.denominator
    lo, hi = _atanh_fixed(a, b, w)
    lo, hi = 2 * lo, 2 * hi
    if y < 0:
        lo, hi = -hi, -lo
    if k:
        l2lo, l2hi = _ln2_fixed(w)
        if k > 0:
            lo, hi = lo + k * l2lo, hi + k * l2hi
        else:
            lo, hi = lo + k * l2hi, hi + k * l2lo
    scale = 1 << w
    out_bits = precision_bits + 2
    return Interval(
        round_down(Fraction(lo, scale), out_bits),
        round_up(Fraction(hi, scale), out_bits),
        precision_bits,
    )


# decimal emission --------------------------------------------------------


def decimal_string(r, digits: int = 25, up: bool = False) -> str:
    """Decimal rendering of r with ``digits`` significant digits, rounded down or up.

    Exact values that fit in ``digits`` digits are printed exactly with no
    trailing zeros, so the string parses back to the same rational.
    """
    r = to_rational(r)
    if r == 0:
        return "0"
    neg = r < 0
    a = abs(r)
    e = _floor_log10(a)
    shift = digits - 1 - e
    if shift >= 0:
        num, den = a.numerator * 10**shift, a.denominator
    else:
        num, den = a.numerator, a.denominator * 10**-shift
    q, rem = divmod(num, den)
    # rounding a negative value toward +inf means truncating its magnitude
    if rem and (up != neg):
        q += 1
    if q == 10**digits:  # carry into a new digit
        q //= 10
        shift -= 1
        e += 1
    s = str(q)
    # q has `digits` digits; value = q * 10**-shift
    s = s.rstrip("0") or "0"
    exp10 = e
    mant = s[0] + ("." + s[1:] if len(s) > 1 else "")
    if -6 <= exp10 < 0:
        body = "0." + "0" * (-exp10 - 1) + s
    elif 0 <= exp10 < 21:
        if len(s) <= exp10 + 1:
            body = s + "0" * (exp10 + 1 - len(s))
        else:
            body = s[: exp10 + 1] + "." + s[exp10 + 1 :]
    else:
        body = f"{mant}e{exp10:+d}"
    return "-" + body if neg else body


def _floor_log10(a: Fraction) -> int:
    # e with 10**e <= a < 10**(e+1), a > 0
    e = int(math.floor((a.numerator.bit_length() - a.denominator.bit_length()) * 0.30102999566398))
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    return e
