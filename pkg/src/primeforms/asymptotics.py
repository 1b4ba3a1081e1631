"""Constants and main terms: Artin's constant, the multiplicative weight c(d),
Li and the sqrt(t)/log t integral, main-term predictions, and the internal
constant identities connecting them (all with certified tails where claimed).
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .arith import (
    IntervalValue,
    euler_product,
    prime_square_tail,
    primes_upto,
    spf_table,
)


class ConstantIdentityError(ArithmeticError):
    """A constant identity failed its certified tolerance."""


def c_of_d(d):
    """c(d) = d^-3 prod_{l | d} (l^3-1)/(l^3-l^2-l-1) for odd d, 0 for even d."""
    if d < 1:
        raise ValueError("need d >= 1")
    if d % 2 == 0:
        return Fraction(0)
    from .arith import factorize

    out = Fraction(1, d**3)
    for ell, _ in factorize(d).factors:
        out *= Fraction(ell**3 - 1, ell**3 - ell**2 - ell - 1)
    return out


_product_cache = {}


def artin_constant(width=1e-8, max_cutoff=1 << 28, primes=None):
    """Certified enclosure of prod over primes of (1 - 1/(l*(l-1)))."""
    if width < 1e-12:
        raise ValueError("width target below 1e-12 is not supported")
    key = ("artin", width)
    if key in _product_cache:
        return _product_cache[key]
    cutoff = 1 << 21
    while True:
        use_primes = primes
        if use_primes is not None and cutoff > int(use_primes[-1]) + 1:
            use_primes = None  # supplied array too small; resieve
        tail = 1.2 * prime_square_tail(cutoff)
        iv = euler_product(
            None,
            cutoff,
            tail,
            local_log=lambda p: np.log1p(-1.0 / (p * (p - 1.0))),
            primes=use_primes,
        )
        if iv.width < width:
            _product_cache[key] = iv
            return iv
        if cutoff >= max_cutoff:
            raise ArithmeticError("cutoff budget exceeded for width target")
        cutoff *= 2


def odd_square_product(cutoff=50_000_000, primes=None):
    """Enclosure of prod over odd primes of (1 - 1/(l^2 - l)); equals 2*C_Art."""
    key = ("odd_square", cutoff)
    if key not in _product_cache:
        if primes is None:
            primes = primes_upto(cutoff)
        odd = primes[primes >= 3]
        _product_cache[key] = euler_product(
            None,
            cutoff,
            1.2 * prime_square_tail(cutoff),
            local_log=lambda p: np.log1p(-1.0 / (p * p - p)),
            primes=odd,
        )
    return _product_cache[key]


def odd_cubic_product(cutoff=2_000_000, primes=None):
    """Enclosure of prod over odd primes of (l^3-l^2-l-1)/(l^3-l^2)."""
    key = ("odd_cubic", cutoff)
    if key not in _product_cache:
        if primes is None:
            primes = primes_upto(cutoff)
        odd = primes[primes >= 3]
        _product_cache[key] = euler_product(
            None,
            cutoff,
            1.2 * prime_square_tail(cutoff),
            local_log=lambda p: np.log1p(-(p + 1.0) / (p * p * (p - 1.0))),
            primes=odd,
        )
    return _product_cache[key]


def c_sum_closed_form(cutoff=2_000_000, primes=None):
    """Enclosure of prod over odd primes of (l^3-l^2-l)/(l^3-l^2-l-1)."""
    key = ("c_sum", cutoff)
    if key not in _product_cache:
        if primes is None:
            primes = primes_upto(cutoff)
        odd = primes[primes >= 3]
        _product_cache[key] = euler_product(
            None,
            cutoff,
            1.2 * prime_square_tail(cutoff),
            local_log=lambda p: np.log1p(1.0 / (p * (p * p - p - 1.0) - 1.0)),
            primes=odd,
        )
    return _product_cache[key]


# ---------------------------------------------------------------------------
# Quadrature


def _adaptive_simpson(g, a, b, tol):
    """(integral, error bound) by adaptive Simpson with interval doubling."""

    def simpson(x0, f0, x2, f2):
        x1 = 0.5 * (x0 + x2)
        f1 = g(x1)
        return x1, f1, (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    total = 0.0
    err = 0.0
    fa, fb = g(a), g(b)
    m, fm, whole = simpson(a, fa, b, fb)
    stack = [(a, fa, m, fm, b, fb, whole, tol)]
    while stack:
        x0, f0, x1, f1, x2, f2, s, t = stack.pop()
        lm, flm, left = simpson(x0, f0, x1, f1)
        rm, frm, right = simpson(x1, f1, x2, f2)
        delta = left + right - s
        if abs(delta) <= 15.0 * t or x2 - x0 < 1e-12 * (b - a):
            total += left + right + delta / 15.0
            err += abs(delta) / 15.0
        else:
            stack.append((x0, f0, lm, flm, x1, f1, left, t / 2.0))
            stack.append((x1, f1, rm, frm, x2, f2, right, t / 2.0))
    return total, err


def li(X, rel_tol=1e-9):
    """Logarithmic integral normalized from 2: int_2^X dt/log t."""
    if X < 2:
        raise ValueError("need X >= 2")
    if X == 2:
        return 0.0
    scale = (X - 2.0) / math.log(X)
    value, _ = _adaptive_simpson(lambda t: 1.0 / math.log(t), 2.0, float(X), rel_tol * scale)
    return value


def sqrtlog_integral(X, rel_tol=1e-9):
    """(int_2^X sqrt(t)/log t dt, certified-style error bound)."""
    if X < 2:
        raise ValueError("need X >= 2")
    if X == 2:
        return 0.0, 0.0
    scale = float(X) ** 1.5 / math.log(X)
    return _adaptive_simpson(
        lambda t: math.sqrt(t) / math.log(t), 2.0, float(X), rel_tol * scale
    )


# ---------------------------------------------------------------------------
# Main terms


@dataclass(frozen=True)
class MainTermBundle:
    X: int
    mt_simple: float  # C_Art * (2 pi / 9) * X^{3/2} / log X
    mt_integral: float  # C_Art * (pi / 3) * int_2^X sqrt(t)/log t dt
    per_d: tuple  # of (d, T_d main term, Q_d main term in integral form)
    quad_error: float
    artin: IntervalValue
    odd_cubic: IntervalValue


def main_terms(X, contents=(1, 3, 5), width=1e-6):
    """Main-term predictions at X for the total census and for contents d."""
    if X < 10:
        raise ValueError("need X >= 10")
    art = artin_constant(width)
    podd = odd_cubic_product()
    integral, quad_err = sqrtlog_integral(X)
    mt_simple = art.mid * (2.0 * math.pi / 9.0) * X**1.5 / math.log(X)
    mt_integral = art.mid * (math.pi / 3.0) * integral
    per_d = []
    for d in contents:
        cd = float(c_of_d(d))
        t_main = (math.pi**2 / 12.0) * d * cd * podd.mid * X / math.log(X)
        q_main = (math.pi / 6.0) * cd * podd.mid * integral
        per_d.append((d, t_main, q_main))
    return MainTermBundle(
        X, mt_simple, mt_integral, tuple(per_d), quad_err, art, podd
    )


# ---------------------------------------------------------------------------
# Constant identities


def _mu_phi_tail(M):
    """Upper bound for sum_{m > M} 1/(m*phi(m)).

    phi(m) >= m / (e^gamma lnln m + 2.51/lnln m) for m >= 3 (Rosser-Schoenfeld),
    so 1/(m phi(m)) <= (1.7811 lnln m + 2.51/lnln m)/m^2; summing by the
    integral test with lnln folded in gives the closed form below.
    """
    ll = math.log(math.log(M))
    a = 1.7811
    b = 2.51 / ll
    return (a * (ll + 1.0 / math.log(M)) + b) / M + (a * ll + b) / (M * M)


def _c_tail(M):
    """Upper bound for sum_{d > M} c(d).

    c(d) <= d^-3 prod_{l|d}(1 + 1/l)^3 <= (d/phi(d))^3 / d^3 and
    d/phi(d) <= 1.7811 lnln d + 2.51/lnln d, folded through the integral test
    (safety factor 2 absorbs the slowly growing lnln^3 numerator).
    """
    ll = math.log(math.log(M))
    return (1.7811 * ll + 2.51 / ll) ** 3 / (M * M)


def mu_phi_odd_sum(cutoff=10**6):
    """(sum over odd m <= cutoff of mu(m)/(m*phi(m)), tail bound)."""
    mu = np.ones(cutoff + 1, dtype=np.int64)
    phi = np.arange(cutoff + 1, dtype=np.int64)
    mask = np.ones(cutoff + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(cutoff) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    for p in np.nonzero(mask)[0]:
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
        phi[p::p] -= phi[p::p] // p
    m = np.arange(cutoff + 1, dtype=np.float64)
    terms = np.zeros(cutoff + 1)
    odd = np.arange(1, cutoff + 1, 2)
    terms[odd] = mu[odd] / (m[odd] * phi[odd])
    return float(math.fsum(terms[terms != 0.0].tolist())), _mu_phi_tail(cutoff)


def c_partial_sum(cutoff=10**6):
    """(sum over d <= cutoff of c(d), tail bound). c is supported on odd d."""
    spf = spf_table(cutoff)[: cutoff + 1].tolist()
    vals = [0.0] * (cutoff + 1)
    vals[1] = 1.0
    local = {}
    out = [1.0]
    for n in range(3, cutoff + 1, 2):
        p = spf[n]
        m = n // p
        k = 1
        while m % p == 0:
            m //= p
            k += 1
        key = (p, k)
        if key not in local:
            local[key] = float(
                Fraction(p**3 - 1, p**3 - p**2 - p - 1) / Fraction(p ** (3 * k))
            )
        vals[n] = vals[m] * local[key]
        out.append(vals[n])
    return math.fsum(out), _c_tail(cutoff)


@dataclass(frozen=True)
class ConstantCheck:
    name: str
    gap: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ConstantReport:
    artin: IntervalValue
    two_artin: IntervalValue
    odd_square: IntervalValue
    mu_phi_sum: float
    mu_phi_tail: float
    c_sum: float
    c_tail: float
    c_closed: IntervalValue
    odd_cubic: IntervalValue
    checks: tuple

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)


def _interval_gap(a, b):
    """0 if the intervals intersect, else the distance between them."""
    return max(0.0, a.lo - b.hi, b.lo - a.hi)


def constant_suite(prime_cutoff=50_000_000, sum_cutoff=10**6, strict=True):
    """Check every internal constant identity; hard failure if any misses
    its tolerance (unless strict=False, which just reports)."""
    primes = primes_upto(prime_cutoff)
    art = artin_constant(4.9e-9, primes=primes)
    two_art = art * IntervalValue.point(2.0)
    odd_sq = odd_square_product(prime_cutoff, primes=primes)
    mu_sum, mu_tail = mu_phi_odd_sum(sum_cutoff)
    c_sum, c_tail = c_partial_sum(sum_cutoff)
    c_closed = c_sum_closed_form()
    podd = odd_cubic_product()
    pi_iv = IntervalValue.point(math.pi, ulps=2)
    checks = []

    gap = _interval_gap(two_art, odd_sq)
    width = max(two_art.width, odd_sq.width)
    checks.append(
        ConstantCheck("two_artin_vs_odd_square_product", gap, 0.0, gap == 0.0)
    )
    checks.append(
        ConstantCheck("enclosure_width_below_1e-8", width, 1e-8, width < 1e-8)
    )

    gap = abs(mu_sum - two_art.mid)
    tol = 1e-4
    checks.append(
        ConstantCheck("mu_over_m_phi_sum_vs_two_artin", gap, tol, gap < tol)
    )

    gap = abs(c_sum - c_closed.mid)
    checks.append(ConstantCheck("c_sum_vs_closed_form_product", gap, tol, gap < tol))

    lhs = pi_iv * IntervalValue.point(1.0 / 9.0, ulps=2) * odd_sq
    rhs = pi_iv * IntervalValue.point(2.0 / 9.0, ulps=2) * art
    gap = _interval_gap(lhs, rhs)
    checks.append(ConstantCheck("pi_ninth_collapse", gap, 0.0, gap == 0.0))

    # consistency of the two odd cubic-product routes: P_odd * sum c(d) = 2 C_Art
    gap = abs(podd.mid * c_sum - two_art.mid)
    checks.append(ConstantCheck("odd_cubic_times_c_sum_vs_two_artin", gap, tol, gap < tol))

    report = ConstantReport(
        art, two_art, odd_sq, mu_sum, mu_tail, c_sum, c_tail, c_closed, podd,
        tuple(checks),
    )
    if strict and not report.all_passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise ConstantIdentityError(f"constant identities failed: {failed}")
    return report
