"""Verification suites.

Each suite returns a :class:`VerifyReport`.  Certified suites decide every
relation with exact rationals or outward-rounded intervals, so a pass is a
proof for the instances checked.  A relation that the enclosures cannot
decide, even after tightening, is recorded as ``inconclusive`` rather than
passed or failed.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Optional

from .bounds import (
    franel_bounds,
    phi,
    phi_derivative_closed_form,
    phi_from_residual,
    residual,
    sharp_bounds,
    sharp_constant,
    toth_mare_bounds,
)
from .exact import bernoulli_number, to_rational
from .psi import (
    LEMMA_COEFF,
    digamma_bracket,
    digamma_residual_enclosure,
    gamma_enclosure,
    shifted_digamma_residual,
    shifted_trigamma_residual,
    trigamma_bracket,
    trigamma_residual_enclosure,
)
from .realnum import DEFAULT_BITS, Interval, decimal_string

__all__ = [
    "Failure",
    "VerifyReport",
    "verify_theorem",
    "verify_phi_monotone",
    "verify_phi_derivative_sign",
    "verify_series_coefficients",
    "verify_integrand_signs",
    "verify_lemma_brackets",
    "merge_reports",
    "random_rationals",
    "quartic_identity_symbolic",
    "integrands",
    "sharp_identity_holds",
    "SUITES",
]

TIGHTEN_FACTOR = 16
MAX_RETRIES = 6
_GAMMA_WIDTH = Fraction(1, 10**40)


@dataclass(frozen=True)
class Failure:
    subject: Fraction  # n or x
    relation: str
    kind: str  # "fail" or "inconclusive"
    witness: tuple[tuple[str, str], ...] = ()

    def sort_key(self):
        return (self.subject, self.relation, self.kind, self.witness)

    def to_json(self) -> dict:
        s = self.subject
        return {
            "subject": str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}",
            "relation": self.relation,
            "kind": self.kind,
            "witness": dict(self.witness),
        }


@dataclass
class VerifyReport:
    suite: str
    range: tuple
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    certified: bool = True
    float_free: bool = False
    relations: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        if any(f.kind == "fail" for f in self.failures):
            return "fail"
        if self.failures:
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "inconclusive": 2}[self.status]

    def count(self, relation: str) -> None:
        self.relations[relation] = self.relations.get(relation, 0) + 1

    def record(self, subject, relation: str, kind: str, **witness) -> None:
        items = tuple(sorted((k, _fmt(v)) for k, v in witness.items()))
        self.failures.append(Failure(Fraction(subject), relation, kind, items))

    def merge(self, other: "VerifyReport") -> "VerifyReport":
        if other.suite != self.suite:
            raise ValueError("cannot merge reports of different suites")
        relations = dict(self.relations)
        for k, v in other.relations.items():
            relations[k] = relations.get(k, 0) + v
        return VerifyReport(
            suite=self.suite,
            range=(min(self.range[0], other.range[0]), max(self.range[1], other.range[1])),
            checked=self.checked + other.checked,
            failures=sorted(set(self.failures) | set(other.failures), key=Failure.sort_key),
            certified=self.certified and other.certified,
            float_free=self.float_free and other.float_free,
            relations=dict(sorted(relations.items())),
        )

    def to_json(self) -> dict:
        lo, hi = self.range
        return {
            "suite": self.suite,
            "range": [_fmt(lo), _fmt(hi)],
            "status": self.status,
            "checked": self.checked,
            "certified": self.certified,
            "float_free": self.float_free,
            "relations": dict(sorted(self.relations.items())),
            "failures": [f.to_json() for f in sorted(self.failures, key=Failure.sort_key)],
        }


def _fmt(v) -> str:
    if isinstance(v, Interval):
        return f"[{decimal_string(v.lo, 25)}, {decimal_string(v.hi, 25, up=True)}]"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


def merge_reports(reports: Iterable[VerifyReport]) -> VerifyReport:
    return reduce(VerifyReport.merge, reports)


def _chunks(start: int, stop: int, parts: int, overlap: int = 0) -> list[tuple[int, int]]:
    # contiguous [a, b] pieces covering [start, stop]; consecutive pieces share `overlap` points
    total = stop - start + 1
    parts = max(1, min(parts, total))
    size = math.ceil(total / parts)
    out = []
    a = start
    while a <= stop:
        b = min(stop, a + size - 1)
        out.append((a, b))
        a = b + 1 - overlap
        if b == stop:
            break
    return out


def _run_chunked(worker: Callable, start: int, stop: int, jobs: int, args: tuple, overlap: int = 0) -> VerifyReport:
    pieces = _chunks(start, stop, jobs * 4 if jobs > 1 else 1, overlap)
    if jobs <= 1 or len(pieces) == 1:
        return merge_reports(worker(a, b, *args) for a, b in pieces)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, a, b, *args) for a, b in pieces]
        return merge_reports(f.result() for f in futures)


def _retrying(compute: Callable[[Fraction], object], decide: Callable[[object], Optional[bool]], width: Fraction):
    """Evaluate, tightening width x1/16 up to MAX_RETRIES times while undecided.

    ``decide`` returns True (holds), False (violated) or None (undecided).
    """
    for _ in range(MAX_RETRIES + 1):
        value = compute(width)
        verdict = decide(value)
        if verdict is not None:
            return verdict, value
        width /= TIGHTEN_FACTOR
    return None, value


# theorem ----------------------------------------------------------------


def sharp_identity_holds() -> bool:
    """1/(2*1 + 1/(1-g) - 2) == 1 - g as rational functions of g."""
    import sympy

    g = sympy.Symbol("g")
    lhs = 1 / (2 * 1 + 1 / (1 - g) - 2)
    return sympy.cancel(lhs - (1 - g)) == 0


def _theorem_chunk(a: int, b: int, target: Fraction, bits: int) -> VerifyReport:
    rep = VerifyReport("theorem", (a, b))
    gamma = gamma_enclosure(_GAMMA_WIDTH, bits).value
    c = sharp_constant(gamma)
    phi1 = phi(1, target, bits)
    third = Fraction(1, 3)

    for n in range(a, b + 1):
        rep.checked += 1
        sharp = sharp_bounds(n, gamma, bits)
        fr = franel_bounds(n, bits)
        tm = toth_mare_bounds(n, bits)

        def decide_all(r: Interval):
            # upper: r < 1/(2n + 1/3) strictly
            if r.hi >= sharp.upper.lo:
                return False if r.lo >= sharp.upper.hi else None
            if n > 1 and not sharp.lower.hi < r.lo:
                return False if r.hi <= sharp.lower.lo else None
            return True

        verdict, r = _retrying(lambda w: residual(n, w, bits), decide_all, target)
        if verdict is None:
            rep.record(n, "sharp_lower <= residual < sharp_upper", "inconclusive",
                       residual=r, lower=sharp.lower, upper=sharp.upper)
        elif not verdict:
            rep.record(n, "sharp_lower <= residual < sharp_upper", "fail",
                       residual=r, lower=sharp.lower, upper=sharp.upper)
        rep.count("residual < sharp_upper")

        if n == 1:
            # equality case: the lower bound is 1 - gamma itself
            rep.count("n=1 identity 1/(2+1/(1-g)-2) == 1-g")
            if not sharp_identity_holds():
                rep.record(1, "n=1 identity 1/(2+1/(1-g)-2) == 1-g", "fail")
            rep.count("n=1 sharp_lower overlaps residual")
            if not sharp.lower.overlaps(r):
                rep.record(1, "n=1 sharp_lower overlaps residual", "fail", residual=r, lower=sharp.lower)
        else:
            rep.count("sharp_lower < residual")

        # residual inside the classical families
        rep.count("franel_lower < residual < franel_upper")
        if not (fr.lower.hi < r.lo and r.hi < fr.upper.lo):
            rep.record(n, "franel_lower < residual < franel_upper", "fail", residual=r)
        rep.count("toth_mare_lower < residual < toth_mare_upper")
        if not (tm.lower.hi < r.lo and r.hi < tm.upper.lo):
            rep.record(n, "toth_mare_lower < residual < toth_mare_upper", "fail", residual=r)

        # the sharp pair is a refinement of both
        rep.count("sharp_lower > franel_lower")
        if not sharp.lower.lo > fr.lower.hi:
            rep.record(n, "sharp_lower > franel_lower", "fail", sharp_lower=sharp.lower, franel_lower=fr.lower)
        rep.count("sharp_upper < franel_upper")
        if not sharp.upper.hi < fr.upper.lo:
            rep.record(n, "sharp_upper < franel_upper", "fail")
        rep.count("sharp_lower > toth_mare_lower")
        if not sharp.lower.lo > tm.lower.hi:
            rep.record(n, "sharp_lower > toth_mare_lower", "fail", sharp_lower=sharp.lower, tm_lower=tm.lower)

        # best-possible evidence
        p = phi_from_residual(n, r)
        rep.count("phi(n) > 1/3")
        if not p.lo > third:
            rep.record(n, "phi(n) > 1/3", "fail" if p.hi <= third else "inconclusive", phi=p)
        if n > 1:
            rep.count("phi(n) < phi(1)")
            if not p.hi < phi1.lo:
                rep.record(n, "phi(n) < phi(1)", "fail" if p.lo >= phi1.hi else "inconclusive", phi=p, phi1=phi1)

    if a <= 1 <= b:
        rep.count("sharp_constant < 2/5")
        if not c.hi < Fraction(2, 5):
            rep.record(1, "sharp_constant < 2/5", "fail", constant=c)
    return rep


def verify_theorem(start: int, stop: int, target_width="1e-20", precision_bits: int = DEFAULT_BITS,
                   jobs: int = 1) -> VerifyReport:
    """Certify sharp_lower <= H_n - ln n - gamma < sharp_upper for n in [start, stop].

    Also certifies, per n, containment in the Franel and Toth-Mare bounds, that
    the sharp pair refines both, phi(n) > 1/3 and phi(n) < phi(1) for n >= 2.
    """
    if not 1 <= start <= stop:
        raise ValueError("need 1 <= start <= stop")
    target = to_rational(target_width)
    return _run_chunked(_theorem_chunk, start, stop, jobs, (target, precision_bits))


# phi monotonicity ---------------------------------------------------------


def _phi_monotone_chunk(a: int, b: int, target: Fraction, bits: int, lemma_coeff) -> VerifyReport:
    rep = VerifyReport("phi_monotone", (a, b))
    vals = {n: phi(n, target, bits, lemma_coeff=lemma_coeff) for n in range(a, b + 1)}
    for n in range(a, b):
        rep.checked += 1
        rep.count("phi(n+1) < phi(n)")
        left, right = vals[n], vals[n + 1]
        if right.hi < left.lo:
            continue
        if right.lo >= left.hi:
            rep.record(n, "phi(n+1) < phi(n)", "fail", phi_n=left, phi_n1=right)
            continue

        def both(w):
            return phi(n, w, bits, lemma_coeff=lemma_coeff), phi(n + 1, w, bits, lemma_coeff=lemma_coeff)

        def decide(pair):
            l, r = pair
            if r.hi < l.lo:
                return True
            if r.lo >= l.hi:
                return False
            return None

        verdict, (left, right) = _retrying(both, decide, target / TIGHTEN_FACTOR)
        if verdict is None:
            rep.record(n, "phi(n+1) < phi(n)", "inconclusive", phi_n=left, phi_n1=right)
        elif not verdict:
            rep.record(n, "phi(n+1) < phi(n)", "fail", phi_n=left, phi_n1=right)
    return rep


def verify_phi_monotone(start: int, stop: int, target_width="1e-20", precision_bits: int = DEFAULT_BITS,
                        jobs: int = 1, *, lemma_coeff: Fraction | None = None) -> VerifyReport:
    """Certify phi(n+1) < phi(n) with disjoint enclosures for start <= n < stop.

    ``lemma_coeff`` swaps in a modified order-1 digamma bracket (mutation hook).
    """
    if not 1 <= start <= stop:
        raise ValueError("need 1 <= start <= stop")
    target = to_rational(target_width)
    if start == stop:
        return VerifyReport("phi_monotone", (start, stop))
    return _run_chunked(_phi_monotone_chunk, start, stop, jobs, (target, precision_bits, lemma_coeff), overlap=1)


# sign of phi' -----------------------------------------------------------------


def verify_phi_derivative_sign(samples, target_width="1e-20", precision_bits: int = DEFAULT_BITS) -> VerifyReport:
    """For x > 12/5 certify 1/x - psi'(x+1) - 2(psi(x+1) - ln x)^2 < 0.

    Alongside, check exactly that the bracket-level bound equals
    (12 - 5x)/(360 x^5) and that this is negative.
    """
    xs = [to_rational(s) for s in samples]
    if not xs:
        raise ValueError("no samples")
    bad = [x for x in xs if x <= Fraction(12, 5)]
    if bad:
        raise ValueError(f"samples must exceed 12/5: {bad[0]}")
    target = to_rational(target_width)
    rep = VerifyReport("phi_derivative_sign", (min(xs), max(xs)))
    for x in sorted(set(xs)):
        rep.checked += 1
        closed = phi_derivative_closed_form(x)
        t_hi = trigamma_bracket(x, 1)[1]
        d_lo = digamma_bracket(x, 1)[0]
        rep.count("bracket bound == (12-5x)/(360x^5)")
        if t_hi - 2 * d_lo * d_lo != closed:
            rep.record(x, "bracket bound == (12-5x)/(360x^5)", "fail", closed_form=closed)
        rep.count("(12-5x)/(360x^5) < 0")
        if not closed < 0:
            rep.record(x, "(12-5x)/(360x^5) < 0", "fail", closed_form=closed)

        def assembled(w):
            t = trigamma_residual_enclosure(x, w, precision_bits).value
            d = digamma_residual_enclosure(x, w, precision_bits).value
            return t - 2 * d.square()

        def decide(v: Interval):
            if v.hi < 0:
                return True
            if v.lo >= 0:
                return False
            return None

        # start no wider than a small fraction of the expected magnitude
        w = min(target, abs(closed) / 64)
        verdict, v = _retrying(assembled, decide, w)
        rep.count("1/x - psi'(x+1) - 2(psi(x+1) - ln x)^2 < 0")
        if verdict is None:
            rep.record(x, "1/x - psi'(x+1) - 2(psi(x+1) - ln x)^2 < 0", "inconclusive", value=v)
        elif not verdict:
            rep.record(x, "1/x - psi'(x+1) - 2(psi(x+1) - ln x)^2 < 0", "fail", value=v)
    return rep


# exact series coefficients ------------------------------------------------------


def _quartic(m: int) -> int:
    return 120 + 218 * m + 119 * m**2 + 22 * m**3 + m**4


def quartic_identity_symbolic() -> bool:
    """720/n! - 360/(n-1)! + 60/(n-2)! - 1/(n-4)! == -Q(n-7)/n!, as polynomials after scaling by n!."""
    import sympy

    n = sympy.Symbol("n")
    lhs = 720 - 360 * n + 60 * n * (n - 1) - n * (n - 1) * (n - 2) * (n - 3)
    m = n - 7
    rhs = -(120 + 218 * m + 119 * m**2 + 22 * m**3 + m**4)
    return sympy.expand(lhs - rhs) == 0


def verify_series_coefficients(n_max: int) -> VerifyReport:
    """Exact checks of the series coefficients behind the lemma brackets, n <= n_max.

    (a) (n-3)(n-4)/n! >= 0 for n >= 3, zero exactly at n = 3, 4;
    (b) (n-2)/n! > 0 for n >= 3;
    (c) 720/n! - 360/(n-1)! + 60/(n-2)! - 1/(n-4)! == -Q(n-7)/n! < 0 for n >= 7,
        Q(m) = 120 + 218m + 119m^2 + 22m^3 + m^4.

    Every quantity is a ratio with the common positive denominator n!, so the
    comparisons run on the integer numerators.  No floats are created.
    """
    if isinstance(n_max, bool) or not isinstance(n_max, int) or n_max < 7:
        raise ValueError("n_max must be an integer >= 7")
    rep = VerifyReport("series_coefficients", (3, n_max), float_free=True)
    rep.count("quartic identity (symbolic)")
    if not quartic_identity_symbolic():
        rep.record(7, "quartic identity (symbolic)", "fail")

    fact = 2  # (n-1)! entering the loop at n = 3
    for n in range(3, n_max + 1):
        fact *= n  # n!
        rep.checked += 1
        a_num = (n - 3) * (n - 4)
        rep.count("(n-3)(n-4)/n! >= 0")
        if a_num < 0 or (a_num == 0) != (n in (3, 4)):
            rep.record(n, "(n-3)(n-4)/n! >= 0", "fail", value=Fraction(a_num, fact))
        rep.count("(n-2)/n! > 0")
        if not n - 2 > 0:
            rep.record(n, "(n-2)/n! > 0", "fail", value=Fraction(n - 2, fact))
        if n >= 7:
            # numerators over n!: n!/(n-1)! = n, n!/(n-2)! = n(n-1), n!/(n-4)! = n(n-1)(n-2)(n-3)
            lhs = 720 - 360 * n + 60 * n * (n - 1) - n * (n - 1) * (n - 2) * (n - 3)
            rhs = -_quartic(n - 7)
            rep.count("quartic identity")
            if lhs != rhs:
                rep.record(n, "quartic identity", "fail", lhs=Fraction(lhs, fact), rhs=Fraction(rhs, fact))
            rep.count("quartic coefficient < 0")
            if not rhs < 0:
                rep.record(n, "quartic coefficient < 0", "fail", value=Fraction(rhs, fact))
    return rep


# integrands (floating point) -----------------------------------------------------

_SERIES_CUTOFF = 1.0
_SERIES_TERMS = 12


def _tail(t: float, k0: int, power_shift: int) -> float:
    # -sum_{k>=k0} B_{2k} t^(2k + power_shift) / (2k)!
    s = 0.0
    for k in range(k0, k0 + _SERIES_TERMS):
        s -= float(bernoulli_number(2 * k)) / math.factorial(2 * k) * t ** (2 * k + power_shift)
    return s


def integrands(t: float) -> tuple[float, float, float, float]:
    """(f1, f2, f3, f4) at t > 0, via the Bernoulli series below t = 1."""
    if t < _SERIES_CUTOFF:
        f2 = _tail(t, 1, -1)
        f1 = _tail(t, 2, -1)
        f3 = _tail(t, 2, 0)
        f4 = _tail(t, 3, 0)
        return f1, f2, f3, f4
    em1 = math.expm1(t)
    f2 = 1 / t - 1 / em1 - 0.5
    f1 = f2 + t / 12
    f3 = 1 - t / em1 - t / 2 + t * t / 12
    f4 = f3 - t**4 / 720
    return f1, f2, f3, f4


def verify_integrand_signs(t_samples) -> VerifyReport:
    """Sampled, non-certified sign checks of the four Binet-type integrands."""
    ts = [float(t) for t in t_samples]
    if not ts:
        raise ValueError("no samples")
    for t in ts:
        if not (0 < t <= 50) or not math.isfinite(t):
            raise ValueError(f"t samples must lie in (0, 50], got {t}")
    rep = VerifyReport("integrand_signs", (Fraction(min(ts)), Fraction(max(ts))), certified=False)
    checks = (("f1 >= 0", 0, 1), ("f2 <= 0", 1, -1), ("f3 >= 0", 2, 1), ("f4 <= 0", 3, -1))
    for t in sorted(set(ts)):
        rep.checked += 1
        vals = integrands(t)
        for name, idx, sign in checks:
            rep.count(name)
            if sign * vals[idx] < 0:
                rep.record(Fraction(t), name, "fail", t=repr(t), value=repr(vals[idx]))
    return rep


# lemma brackets ------------------------------------------------------------------------


def random_rationals(count: int, upper: int = 100, seed: int = 0) -> list[Fraction]:
    """Deterministic sample of ``count`` distinct rationals in (0, upper]."""
    rng = random.Random(seed)
    seen: dict[Fraction, None] = {}
    while len(seen) < count:
        den = rng.randint(1, 1000)
        seen.setdefault(Fraction(rng.randint(1, upper * den), den))
    return list(seen)


def verify_lemma_brackets(samples, shift: int = 20, precision_bits: int = DEFAULT_BITS,
                          *, lemma_coeff: Fraction = LEMMA_COEFF) -> VerifyReport:
    """Check that the order-1 brackets at x contain the shift-k refined enclosures.

    The raw brackets always use the published constants; ``lemma_coeff`` only
    changes the bracket used inside the refinement (mutation hook).
    """
    xs = [to_rational(s) for s in samples]
    if not xs:
        raise ValueError("no samples")
    rep = VerifyReport("lemma_brackets", (min(xs), max(xs)))
    for x in sorted(set(xs)):
        if x <= 0:
            raise ValueError(f"samples must be positive, got {x}")
        rep.checked += 1
        lo, hi = digamma_bracket(x, 1)
        refined = shifted_digamma_residual(x, shift, 1, precision_bits, lemma_coeff).value
        rep.count("digamma bracket contains refined")
        if not (lo <= refined.lo and refined.hi <= hi):
            rep.record(x, "digamma bracket contains refined", "fail",
                       bracket=Interval(lo, hi, precision_bits), refined=refined)
        lo, hi = trigamma_bracket(x, 1)
        refined = shifted_trigamma_residual(x, shift, 1, precision_bits).value
        rep.count("trigamma bracket contains refined")
        if not (lo <= refined.lo and refined.hi <= hi):
            rep.record(x, "trigamma bracket contains refined", "fail",
                       bracket=Interval(lo, hi, precision_bits), refined=refined)
    return rep


SUITES = ("theorem", "phi-monotone", "phi-derivative", "series", "integrands", "lemma")
