from fractions import Fraction

import mpmath
import pytest

from harmonic_bounds.exact import harmonic_exact
from harmonic_bounds.psi import (
    PrecisionError,
    digamma_bracket,
    digamma_residual_enclosure,
    euler_gamma_enclosure,
    gamma_enclosure,
    shifted_digamma_residual,
    shifted_trigamma_residual,
    trigamma_bracket,
    trigamma_residual_enclosure,
)
from harmonic_bounds.realnum import from_rational, ln_enclosure
from harmonic_bounds.verify import random_rationals

GAMMA_17 = Fraction("0.57721566490153286")
# the 17 published digits are a truncation: gamma lies in [GAMMA_17, GAMMA_17 + 1e-17)
GAMMA_TRUNC = (GAMMA_17, GAMMA_17 + Fraction(1, 10**17))


def within_digits(iv, lo, hi):
    return lo <= iv.lo and iv.hi <= hi


def mp_value(expr, prec=400):
    with mpmath.workprec(prec):
        return Fraction(mpmath.nstr(expr(), 110, strip_zeros=False))


def mp_digamma_residual(x):
    def f():
        xm = mpmath.mpf(x.numerator) / x.denominator
        return mpmath.digamma(xm + 1) - mpmath.log(xm)
    return mp_value(f)


def mp_trigamma_residual(x):
    def f():
        xm = mpmath.mpf(x.numerator) / x.denominator
        return 1 / xm - mpmath.psi(1, xm + 1)
    return mp_value(f)


def test_raw_digamma_bracket_at_ten():
    assert digamma_bracket(10, 1) == (Fraction(1, 20) - Fraction(1, 1200), Fraction(1, 20))


def test_raw_trigamma_bracket_at_ten():
    lo = Fraction(1, 200) - Fraction(1, 6000)
    assert trigamma_bracket(10, 1) == (lo, lo + Fraction(1, 3000000))


def test_digamma_one_is_one_minus_gamma():
    enc = digamma_residual_enclosure(1, Fraction(1, 10**10))
    assert enc.value.width <= Fraction(11, 10**11)
    # 1 - gamma from the 17 published digits
    assert enc.value.lo <= 1 - GAMMA_TRUNC[0] and 1 - GAMMA_TRUNC[1] <= enc.value.hi


def test_digamma_three_matches_harmonic_route():
    enc = digamma_residual_enclosure(3, Fraction(1, 10**20)).value
    g = euler_gamma_enclosure(50, 10).value
    other = from_rational(harmonic_exact(3)) - ln_enclosure(3) - g
    assert enc.overlaps(other)
    assert enc.width <= Fraction(11, 10**21)


def test_lemma_only_route():
    enc = digamma_residual_enclosure(1, Fraction(1, 10**6), order=1)
    assert enc.method == "lemma_bracket" and enc.order_q == 1
    assert enc.bracket_width <= Fraction(1, 10**6)
    assert enc.value.contains(mp_digamma_residual(Fraction(1)))


def test_lemma_only_route_refuses_hopeless_shift():
    with pytest.raises(ValueError):
        digamma_residual_enclosure(1, Fraction(1, 10**20), order=1)


def test_trigamma_one():
    enc = trigamma_residual_enclosure(1, Fraction(1, 10**10))
    # psi'(2) = pi^2/6 - 1, with zeta(2) from an independent oracle
    with mpmath.workprec(300):
        ref = Fraction(mpmath.nstr(2 - mpmath.zeta(2), 60))
    assert abs(enc.value.mid - ref) < Fraction(1, 10**10)
    assert enc.value.contains(mp_trigamma_residual(Fraction(1)))


def test_trigamma_width_at_shift_ten():
    enc = shifted_trigamma_residual(1, 10, 1)
    assert enc.bracket_width <= Fraction(1, 30 * 11**5)


@pytest.mark.parametrize("x", [Fraction(1, 1000), Fraction(1, 3), Fraction(1), Fraction(7, 2), Fraction(50), Fraction(12345, 7)])
@pytest.mark.parametrize("width", [Fraction(1, 10**8), Fraction(1, 10**25), Fraction(1, 10**40)])
def test_enclosures_against_mpmath(x, width):
    d = digamma_residual_enclosure(x, width, 200)
    t = trigamma_residual_enclosure(x, width, 200)
    assert d.value.contains(mp_digamma_residual(x))
    assert t.value.contains(mp_trigamma_residual(x))
    assert d.value.width <= width * Fraction(11, 10)
    assert t.value.width <= width * Fraction(11, 10)


@pytest.mark.parametrize("q", range(1, 12))
def test_higher_order_brackets_contain_truth(q):
    for x in (Fraction(1, 2), Fraction(3), Fraction(17, 3), Fraction(40)):
        lo, hi = digamma_bracket(x, q)
        v = mp_digamma_residual(x)
        assert lo <= v <= hi
        lo, hi = trigamma_bracket(x, q)
        v = mp_trigamma_residual(x)
        assert lo <= v <= hi


def test_refined_nested_in_raw_bracket():
    for x in random_rationals(1000, seed=11):
        lo, hi = digamma_bracket(x, 1)
        refined = shifted_digamma_residual(x, 20, 1).value
        assert lo <= refined.lo and refined.hi <= hi


def test_shift_recurrence_consistency():
    x = Fraction(5, 3)
    a = shifted_digamma_residual(x, 0, 6, 200).value
    b = shifted_digamma_residual(x, 15, 6, 200).value
    assert a.overlaps(b)
    assert b.width < a.width


def test_input_validation():
    with pytest.raises(ValueError):
        digamma_residual_enclosure(0, Fraction(1, 10))
    with pytest.raises(ValueError):
        digamma_residual_enclosure(1, 0)
    with pytest.raises(ValueError):
        trigamma_residual_enclosure(-1, Fraction(1, 10))
    with pytest.raises(ValueError):
        euler_gamma_enclosure(0, 3)
    with pytest.raises(ValueError):
        euler_gamma_enclosure(3, 0)


def test_precision_too_small_is_an_error():
    with pytest.raises(PrecisionError):
        digamma_residual_enclosure(1, Fraction(1, 10**30), 40)


def test_gamma_n1_q1_exact():
    enc = euler_gamma_enclosure(1, 1)
    assert enc.value.contains(Fraction(5, 12)) and enc.value.contains(Fraction(7, 12))
    assert enc.value.width - Fraction(1, 6) <= Fraction(1, 2**126)


def test_gamma_n100_q8():
    enc = euler_gamma_enclosure(100, 8, 256)
    assert within_digits(enc.value, *GAMMA_TRUNC)
    from harmonic_bounds.exact import bernoulli_number
    assert enc.value.width <= 2 * abs(bernoulli_number(16)) / (16 * Fraction(100) ** 16) + Fraction(1, 10**60)
    assert enc.method == "euler_maclaurin" and enc.order_q == 8


def test_gamma_parameter_self_consistency():
    a = euler_gamma_enclosure(10, 3).value
    b = euler_gamma_enclosure(50, 5).value
    assert a.overlaps(b)


def test_gamma_width_shrinks_in_n_and_pairs_intersect():
    encs = {}
    for q in (1, 2, 4, 6):
        prev = None
        for n in (1, 2, 5, 10, 20, 40, 80):
            v = euler_gamma_enclosure(n, q).value
            encs[n, q] = v
            if prev is not None:
                assert v.width < prev.width
            prev = v
    values = list(encs.values())
    for i, a in enumerate(values):
        # a truncated 17-digit value may sit below gamma by <1e-17; test the true-value window
        assert a.lo < GAMMA_TRUNC[1] and a.hi >= GAMMA_TRUNC[0]
        for b in values[i + 1:]:
            assert a.overlaps(b)


def test_tight_gamma_contains_published_digits():
    g = gamma_enclosure(Fraction(1, 10**50), 256).value
    assert g.width <= Fraction(1, 10**50)
    assert g.lo > GAMMA_TRUNC[0] and g.hi < GAMMA_TRUNC[1]


def test_harmonic_recombination():
    g = euler_gamma_enclosure(60, 12, 192).value
    for n in range(1, 201):
        d = digamma_residual_enclosure(n, Fraction(1, 10**30), 192).value
        total = g + ln_enclosure(n, 192) + d
        assert total.contains(harmonic_exact(n))
