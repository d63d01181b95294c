from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonic_bounds.exact import (
    bernoulli_number,
    bernoulli_polynomial,
    harmonic_exact,
    harmonic_range,
    rational_str,
    to_rational,
)


def harmonic_leftfold(n):
    s = Fraction(0)
    for i in range(1, n + 1):
        s += Fraction(1, i)
    return s


def bernoulli_akiyama_tanigawa(m):
    # yields B_m with B_1 = +1/2; even indices agree with the other convention
    a = [Fraction(0)] * (m + 1)
    for i in range(m + 1):
        a[i] = Fraction(1, i + 1)
        for j in range(i, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


@pytest.mark.parametrize("n, expected", [(1, Fraction(1)), (2, Fraction(3, 2)), (3, Fraction(11, 6)), (5, Fraction(137, 60))])
def test_harmonic_examples(n, expected):
    assert harmonic_exact(n) == expected


def test_harmonic_five_by_direct_summation():
    assert Fraction(1) + Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 4) + Fraction(1, 5) == Fraction(137, 60)


@pytest.mark.parametrize("n", [0, -3])
def test_harmonic_rejects_nonpositive(n):
    with pytest.raises(ValueError):
        harmonic_exact(n)


def test_harmonic_rejects_non_int():
    with pytest.raises(TypeError):
        harmonic_exact(2.0)


@pytest.mark.parametrize("n", [1, 2, 7, 64, 333, 1000])
def test_balanced_matches_leftfold(n):
    assert harmonic_exact(n) == harmonic_leftfold(n)


def test_harmonic_recurrence():
    prev = harmonic_exact(1)
    for n in range(1, 300):
        cur = harmonic_exact(n + 1)
        assert cur - prev == Fraction(1, n + 1)
        prev = cur


def test_harmonic_range():
    assert harmonic_range(4, 3) == 0
    assert harmonic_range(3, 5) == harmonic_exact(5) - harmonic_exact(2)


def test_harmonic_canonical_form():
    h = harmonic_exact(50)
    assert h.denominator > 0
    from math import gcd
    assert gcd(h.numerator, h.denominator) == 1


@pytest.mark.parametrize("m, expected", [(0, Fraction(1)), (1, Fraction(-1, 2)), (2, Fraction(1, 6)),
                                         (4, Fraction(-1, 30)), (12, Fraction(-691, 2730))])
def test_bernoulli_examples(m, expected):
    assert bernoulli_number(m) == expected


def test_bernoulli_two_oracles_agree():
    for m in range(0, 61, 2):
        assert bernoulli_number(m) == bernoulli_akiyama_tanigawa(m)


def test_bernoulli_recurrence_identity():
    for m in range(1, 40):
        assert sum(comb(m + 1, k) * bernoulli_number(k) for k in range(m + 1)) == 0


def test_odd_bernoulli_vanish():
    assert all(bernoulli_number(m) == 0 for m in range(3, 100, 2))


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli_number(-2)


@pytest.mark.parametrize("m, x, expected", [
    (1, Fraction(0), Fraction(-1, 2)),
    (2, Fraction(1), Fraction(1, 6)),
    (3, Fraction(1, 2), Fraction(0)),
])
def test_bernoulli_polynomial_examples(m, x, expected):
    assert bernoulli_polynomial(m, x) == expected


def test_bernoulli_polynomial_explicit_cubic():
    # B_3(x) = x^3 - 3x^2/2 + x/2
    for x in (Fraction(-2), Fraction(1, 3), Fraction(5, 7)):
        assert bernoulli_polynomial(3, x) == x**3 - Fraction(3, 2) * x**2 + x / 2


def test_bernoulli_polynomial_at_one_equals_number():
    for m in range(2, 20):
        assert bernoulli_polynomial(m, 1) == bernoulli_number(m)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=50)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(min_value=1, max_value=12), x=rationals)
def test_bernoulli_polynomial_difference(m, x):
    assert bernoulli_polynomial(m, x + 1) - bernoulli_polynomial(m, x) == m * x ** (m - 1)


def test_to_rational_parses_exactly():
    assert to_rational("1e-20") == Fraction(1, 10**20)
    assert to_rational("7/3") == Fraction(7, 3)
    assert to_rational(5) == 5
    with pytest.raises(TypeError):
        to_rational(0.1)
    with pytest.raises(ValueError):
        to_rational("abc")


def test_rational_str():
    assert rational_str(harmonic_exact(3)) == "11/6"
