"""Exact integer arithmetic foundation.

Primes (plain and segmented sieves), factorization, Kronecker symbols,
multiplicative functions, and certified Euler products over primes with
outward-rounded interval arithmetic.
"""

from dataclasses import dataclass
import math
import zlib  # noqa: F401  (re-exported convenience for cache users)

import numpy as np

# Test hook: when set to a callable (D, n, value) -> value, every result of the
# pure-Python kronecker() is piped through it. Used by the verify command's
# fault-injection test; must stay None in production.
_kronecker_fault_hook = None

_SPF_LIMIT = 1 << 20
_spf_cache = {}


def spf_table(limit):
    """Smallest-prime-factor table for 0..limit as an int64 numpy array."""
    for cached in _spf_cache:
        if cached >= limit:
            return _spf_cache[cached]
    spf = np.arange(limit + 1, dtype=np.int64)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            seg = spf[i * i :: i]
            idx = np.arange(i * i, limit + 1, i, dtype=np.int64)
            seg[seg == idx] = i
            spf[i * i :: i] = seg
    _spf_cache.clear()
    _spf_cache[limit] = spf
    return spf


def prime_mask(limit):
    """Boolean array m with m[n] true iff n is prime, for 0 <= n <= limit."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return mask


def primes_upto(limit):
    """Ascending int64 array of all primes <= limit."""
    return np.nonzero(prime_mask(limit))[0].astype(np.int64)


@dataclass(frozen=True)
class PrimeRange:
    """All primes in the closed interval [lo, hi], ascending."""

    lo: int
    hi: int
    primes: tuple

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)


def sieve_primes(lo, hi):
    """Segmented sieve: PrimeRange of the primes in [lo, hi]."""
    if not (0 <= lo <= hi):
        raise ValueError("need 0 <= lo <= hi")
    lo_eff = max(lo, 2)
    if lo_eff > hi:
        return PrimeRange(lo, hi, ())
    base = primes_upto(math.isqrt(hi))
    mask = np.ones(hi - lo_eff + 1, dtype=bool)
    for p in base:
        p = int(p)
        start = max(p * p, ((lo_eff + p - 1) // p) * p)
        if start > hi:
            continue
        mask[start - lo_eff :: p] = False
        if p >= lo_eff:
            mask[p - lo_eff] = True
    found = np.nonzero(mask)[0] + lo_eff
    return PrimeRange(lo, hi, tuple(int(p) for p in found))


# ---------------------------------------------------------------------------
# Kronecker symbol


def _kronecker_raw(D, n):
    if n < 0:
        raise ValueError("second argument must be non-negative")
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n % 2 == 0:
        if D % 2 == 0:
            return 0
        two = -1 if D % 8 in (3, 5) else 1
        while n % 2 == 0:
            n //= 2
            result *= two
    # Jacobi symbol (D|n) for odd n > 0 via quadratic reciprocity.
    a = D % n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D, n):
    """Kronecker symbol (D|n), totally defined for n >= 0.

    Completely multiplicative in n, with the standard rule at n = 2
    (via D mod 8) and (D|0) = [|D| = 1].
    """
    val = _kronecker_raw(D, n)
    if _kronecker_fault_hook is not None:
        val = _kronecker_fault_hook(D, n, val)
    return val


# ---------------------------------------------------------------------------
# Factorization


@dataclass(frozen=True)
class Factorization:
    """value = product of prime**exponent, primes strictly increasing."""

    value: int
    factors: tuple  # of (prime, exponent)

    def divisors(self):
        """All divisors of value, ascending."""
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**j for d in divs for j in range(e + 1)]
        return sorted(divs)

    def radical(self):
        r = 1
        for p, _ in self.factors:
            r *= p
        return r


def is_probable_prime(n):
    """Deterministic Miller-Rabin for n < 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n):
    """A nontrivial factor of composite n (no small factors required)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 1, 128
        g = q = r = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n):
    """Factorization of n >= 1 (n <= 2^63): trial division by sieved primes,
    then Miller-Rabin plus a Brent-rho splitter for 64-bit leftovers."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    orig = n
    factors = {}
    if n < _SPF_LIMIT:
        spf = spf_table(_SPF_LIMIT - 1)
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors[p] = e
    else:
        for p in _TRIAL_PRIMES:
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                factors[p] = e
        if n > 1:
            stack = [n]
            while stack:
                m = stack.pop()
                if m < _TRIAL_LIMIT * _TRIAL_LIMIT and m > 1:
                    # below the trial bound squared, the leftover is prime
                    factors[m] = factors.get(m, 0) + 1
                elif is_probable_prime(m):
                    factors[m] = factors.get(m, 0) + 1
                else:
                    g = _pollard_brent(m)
                    stack.append(g)
                    stack.append(m // g)
    return Factorization(orig, tuple(sorted(factors.items())))


_TRIAL_LIMIT = 10**6
_TRIAL_PRIMES = [int(p) for p in primes_upto(_TRIAL_LIMIT)]


def mu_phi(f):
    """(Moebius mu, Euler phi) of f.value."""
    mu = 1
    phi = 1
    for p, e in f.factors:
        phi *= (p - 1) * p ** (e - 1)
        mu = 0 if e > 1 else -mu
    return mu, phi


def squarefree_decompose(n):
    """Unique (s, k) with n = s * k^2 and s squarefree."""
    f = factorize(n)
    s = 1
    k = 1
    for p, e in f.factors:
        if e % 2 == 1:
            s *= p
        k *= p ** (e // 2)
    return s, k


def sigma_z(f, z):
    """sigma_z(n) = sum over divisors m of n of m^z, multiplicatively."""
    total = 1.0
    for p, e in f.factors:
        total *= math.fsum(float(p) ** (z * j) for j in range(e + 1))
    return total


# ---------------------------------------------------------------------------
# Interval arithmetic

_EPS = math.ulp(1.0)


def _down(x):
    return math.nextafter(x, -math.inf)


def _up(x):
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class IntervalValue:
    """Certified real enclosure [lo, hi]; arithmetic is outward-rounded."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x, ulps=1):
        lo = hi = float(x)
        for _ in range(ulps):
            lo = _down(lo)
            hi = _up(hi)
        return cls(lo, hi)

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x):
        return self.lo <= x <= self.hi

    def intersects(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        o = _as_interval(other)
        return IntervalValue(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_interval(other)
        return IntervalValue(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __mul__(self, other):
        o = _as_interval(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return IntervalValue(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_interval(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains 0")
        quots = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return IntervalValue(_down(min(quots)), _up(max(quots)))


def _as_interval(x):
    if isinstance(x, IntervalValue):
        return x
    return IntervalValue.point(x)


def prime_square_tail(P):
    """Upper bound for sum over primes p > P of 1/p^2.

    Abel summation against pi(x) < 1.25506 x / log x (valid for x > 1)
    gives sum_{p > P} p^-2 <= 2 * 1.25506 / (P log P).
    """
    if P < 2:
        raise ValueError("need P >= 2")
    return 2.52 / (P * math.log(P))


def euler_product(local_factor, cutoff, tail_log_sum, *, local_log=None, primes=None):
    """Certified enclosure of an infinite product over primes.

    local_factor maps a numpy array of primes to the (positive) local factors;
    tail_log_sum is a caller-supplied closed-form upper bound for
    sum over primes l > cutoff of |log local_factor(l)|. If local_log is given
    it must return log(local_factor) accurate to 4 ulp relative (e.g. built on
    log1p); this keeps the float widening proportional to the log magnitudes.
    """
    if not math.isfinite(tail_log_sum) or tail_log_sum < 0:
        raise ValueError("tail_log_sum must be finite and non-negative")
    if primes is None:
        primes = primes_upto(cutoff)
    else:
        primes = primes[primes <= cutoff]
    pf = primes.astype(np.float64)
    if local_log is not None:
        logs = np.asarray(local_log(pf), dtype=np.float64)
        float_radius = 8.0 * _EPS * math.fsum(map(abs, logs.tolist()))
    else:
        vals = np.asarray(local_factor(pf), dtype=np.float64)
        if np.any(vals <= 0):
            raise ValueError("local factors must be positive")
        logs = np.log(vals)
        # conservative: ~4 ulp relative error per factor evaluation
        float_radius = _EPS * (
            math.fsum(map(abs, logs.tolist())) + 4.0 * len(logs) + 4.0
        )
    s = math.fsum(logs.tolist())
    r = float_radius + tail_log_sum
    return IntervalValue(_down(math.exp(_down(s - r))), _up(math.exp(_up(s + r))))
