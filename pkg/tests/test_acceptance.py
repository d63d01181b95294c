"""Acceptance criteria, each at its stated tolerance.

Published decimal constants are truncations of the true value, so "matches the
published digits" is checked as: the certified interval lies inside
[digits, digits + one unit in the last place).
"""

import time
from fractions import Fraction

import pytest

from harmonic_bounds.bounds import phi, sharp_constant
from harmonic_bounds.psi import euler_gamma_enclosure, gamma_enclosure
from harmonic_bounds.verify import (
    random_rationals,
    verify_lemma_brackets,
    verify_phi_monotone,
    verify_series_coefficients,
    verify_theorem,
)

N_THEOREM = 10**5
N_MONOTONE = 10**4


def digit_window(s: str) -> tuple[Fraction, Fraction]:
    lo = Fraction(s)
    ulp = Fraction(1, 10 ** len(s.split(".")[1]))
    return lo, lo + ulp


def inside_window(iv, s: str) -> bool:
    lo, hi = digit_window(s)
    return lo <= iv.lo and iv.hi < hi


@pytest.fixture(scope="module")
def theorem_sweep():
    t0 = time.perf_counter()
    report = verify_theorem(1, N_THEOREM, "1e-20")
    return report, time.perf_counter() - t0


@pytest.mark.criterion(1, "gamma(n=100, q=8, 256 bits): width <= 1e-25, matches 0.57721566490153286, < 1 s")
def test_gamma_reproduction():
    t0 = time.perf_counter()
    g = euler_gamma_enclosure(100, 8, 256).value
    elapsed = time.perf_counter() - t0
    assert g.width <= Fraction(1, 10**25)
    assert inside_window(g, "0.57721566490153286")
    assert elapsed < 1.0


@pytest.mark.criterion(2, "phi(1), phi(2), phi(3) at width 1e-18 match published digits, < 1 s each")
@pytest.mark.parametrize("x, digits", [
    (1, "0.36527211862544155"),
    (2, "0.35469600731465752"),
    (3, "0.34898948531361115"),
])
def test_phi_values(x, digits):
    t0 = time.perf_counter()
    v = phi(x, "1e-18")
    elapsed = time.perf_counter() - t0
    assert v.width <= Fraction(1, 10**18)
    assert inside_window(v, digits)
    assert elapsed < 1.0


@pytest.mark.criterion(3, "verify_theorem(1, 1e5) at width 1e-20: 0 failures, n=1 identity, strict upper, < 120 s")
def test_theorem_sweep(theorem_sweep):
    report, elapsed = theorem_sweep
    assert report.status == "pass", report.failures[:5]
    assert report.checked == N_THEOREM
    assert report.relations["n=1 identity 1/(2+1/(1-g)-2) == 1-g"] == 1
    assert report.relations["residual < sharp_upper"] == N_THEOREM
    assert report.relations["sharp_lower < residual"] == N_THEOREM - 1
    assert elapsed < 120


@pytest.mark.criterion(4, "sharpness: phi(n) <= phi(1) for n <= 1e4; phi(1e4), phi(1e6) approach 1/3 from above")
def test_sharpness_upper_constant(theorem_sweep):
    report, _ = theorem_sweep
    # the sweep certifies phi(n) < phi(1) for every 2 <= n <= 1e5
    assert report.status == "pass"
    assert report.relations["phi(n) < phi(1)"] == N_THEOREM - 1


@pytest.mark.criterion(4, "sharpness: phi(n) <= phi(1) for n <= 1e4; phi(1e4), phi(1e6) approach 1/3 from above")
@pytest.mark.parametrize("n, bound, window", [
    (10**4, Fraction(1, 10**3), (Fraction("5.55531e-6"), Fraction("5.55532e-6"))),
    (10**6, Fraction(1, 10**5), (Fraction("5.555553e-8"), Fraction("5.555554e-8"))),
])
def test_sharpness_limit(n, bound, window):
    gap = phi(n, "1e-20") - Fraction(1, 3)
    assert 0 < gap.lo and gap.hi < bound
    # frozen from an independent 300-bit digamma evaluation
    assert window[0] < gap.lo and gap.hi < window[1]


@pytest.mark.criterion(5, "verify_phi_monotone(1, 1e4): strict separation at every consecutive pair")
def test_phi_monotone():
    report = verify_phi_monotone(1, N_MONOTONE, "1e-20")
    assert report.status == "pass", report.failures[:5]
    assert report.relations["phi(n+1) < phi(n)"] == N_MONOTONE - 1


@pytest.mark.criterion(6, "verify_series_coefficients(1e4): exact, float-free, < 10 s")
def test_series_coefficients():
    t0 = time.perf_counter()
    report = verify_series_coefficients(10**4)
    elapsed = time.perf_counter() - t0
    assert report.status == "pass", report.failures[:5]
    assert report.float_free
    assert report.relations["quartic identity (symbolic)"] == 1
    assert report.relations["quartic identity"] == 10**4 - 6
    assert elapsed < 10


@pytest.mark.criterion(7, "family ordering for n <= 1e5; sharp constant ~0.36527 < 2/5")
def test_family_ordering(theorem_sweep):
    report, _ = theorem_sweep
    for rel in ("sharp_lower > franel_lower", "sharp_upper < franel_upper", "sharp_lower > toth_mare_lower"):
        assert report.relations[rel] == N_THEOREM
    assert not [f for f in report.failures if f.relation in ("sharp_lower > franel_lower",
                                                             "sharp_upper < franel_upper",
                                                             "sharp_lower > toth_mare_lower")]
    c = sharp_constant(gamma_enclosure("1e-40").value)
    assert c.hi < Fraction(2, 5)
    assert inside_window(c, "0.36527")


@pytest.mark.criterion(8, "lemma brackets contain k=20 refinements on 1000 rationals; 1/10 mutation detected")
def test_lemma_brackets():
    xs = random_rationals(1000)
    assert len(set(xs)) == 1000 and all(0 < x <= 100 for x in xs)
    report = verify_lemma_brackets(xs, shift=20)
    assert report.status == "pass", report.failures[:5]
    assert report.relations["digamma bracket contains refined"] == 1000
    assert report.relations["trigamma bracket contains refined"] == 1000

    mutated = verify_lemma_brackets(xs, shift=20, lemma_coeff=Fraction(1, 10))
    assert mutated.status == "fail"
    assert len(mutated.failures) > 0
