"""Positive definite binary quadratic forms.

Gauss reduction with unimodular tracking, reduced-form enumeration, exact
class numbers h(D) and unweighted totals H(D) with per-content breakdown,
and the fundamental-domain census Q(X) over primes p <= X (discriminants
1 - 4p), computed by direct lattice enumeration.
"""

from dataclasses import dataclass
import math

import numpy as np

from .arith import prime_mask, primes_upto


@dataclass(frozen=True)
class QuadForm:
    """The form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def content(self):
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def is_positive_definite(self):
        return self.a > 0 and self.discriminant() < 0

    def is_reduced(self):
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (abs(b) == a or a == c):
            return False
        return True

    def evaluate(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y


@dataclass(frozen=True)
class UnimodularMap:
    """Matrix (r s; t u) with det 1, acting by (x, y) -> (r x + s y, t x + u y)."""

    r: int
    s: int
    t: int
    u: int

    def __post_init__(self):
        if self.r * self.u - self.s * self.t != 1:
            raise ValueError("determinant must be 1")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def compose(self, other):
        """The map 'apply self, then other' on forms: matrix product self*other."""
        return UnimodularMap(
            self.r * other.r + self.s * other.t,
            self.r * other.s + self.s * other.u,
            self.t * other.r + self.u * other.t,
            self.t * other.s + self.u * other.u,
        )

    def apply(self, F):
        r, s, t, u = self.r, self.s, self.t, self.u
        a, b, c = F.a, F.b, F.c
        return QuadForm(
            a * r * r + b * r * t + c * t * t,
            2 * a * r * s + b * (r * u + s * t) + 2 * c * t * u,
            a * s * s + b * s * u + c * u * u,
        )


def discriminant(F):
    return F.discriminant()


def reduce_form(F):
    """Gauss-reduce a positive definite form.

    Returns (reduced form, map) with map.apply(F) == reduced form. The output
    satisfies |b| <= a <= c with b >= 0 whenever |b| = a or a = c.
    """
    if not F.is_positive_definite():
        raise ValueError("form must be positive definite")
    a, b, c = F.a, F.b, F.c
    U = UnimodularMap.identity()
    while True:
        # translate b into (-a, a]
        if not (-a < b <= a):
            m = (a - b) // (2 * a)
            U = U.compose(UnimodularMap(1, m, 0, 1))
            c = a * m * m + b * m + c
            b = b + 2 * a * m
        if a > c or (a == c and b < 0):
            U = U.compose(UnimodularMap(0, -1, 1, 0))
            a, b, c = c, -b, a
        else:
            break
    out = QuadForm(a, b, c)
    assert out.is_reduced()
    return out, U


def enumerate_reduced(D):
    """One reduced representative per class of discriminant D, lexicographic."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need D < 0 with D = 0 or 1 mod 4")
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        bstart = -a if (a - D) % 2 == 0 else -a + 1
        for b in range(bstart, a + 1, 2):
            num = b * b - D
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            out.append(QuadForm(a, b, c))
    out.sort(key=lambda F: (F.a, F.b, F.c))
    return out


@dataclass(frozen=True)
class ClassCount:
    h: int
    H: int
    breakdown: tuple  # of (content d, primitive count of discriminant D/d^2)


def class_numbers(D):
    """(h, H, per-content breakdown) from exhaustive reduced enumeration."""
    counts = {}
    for F in enumerate_reduced(D):
        d = F.content()
        counts[d] = counts.get(d, 0) + 1
    H = sum(counts.values())
    return ClassCount(counts.get(1, 0), H, tuple(sorted(counts.items())))


def class_number_table(limit, primitive_only=True):
    """h(-m) for all 0 < m <= limit (0 where -m is not a discriminant).

    Vectorized reduced-form count (all classes when primitive_only is false);
    independent of the analytic route.
    """
    h = np.zeros(limit + 1, dtype=np.int64)
    amax = math.isqrt(limit // 3)
    for a in range(1, amax + 1):
        for b in range(0, a + 1):
            cmax = (limit + b * b) // (4 * a)
            if cmax < a:
                continue
            cs = np.arange(a, cmax + 1, dtype=np.int64)
            m = 4 * a * cs - b * b
            keep = m > 0
            cs, m = cs[keep], m[keep]
            g0 = math.gcd(a, b)
            if primitive_only and g0 > 1:
                prim = np.gcd(g0, cs) == 1
                cs, m = cs[prim], m[prim]
            # forms (a, b, c) and (a, -b, c) are distinct classes except on
            # the boundary b = 0, b = a, or a = c
            w = np.full(len(cs), 2, dtype=np.int64)
            if b == 0 or b == a:
                w[:] = 1
            else:
                w[cs == a] = 1
            np.add.at(h, m, w)
    return h


# ---------------------------------------------------------------------------
# Census


@dataclass(frozen=True)
class CensusRow:
    p: int
    H: int
    breakdown: tuple  # of (content d, primitive count), ascending in d


@dataclass(frozen=True)
class CensusTable:
    """Per-prime rows (p, H(1-4p), content breakdown); total = Q over the rows."""

    rows: tuple

    def __post_init__(self):
        for row in self.rows:
            assert row.H == sum(n for _, n in row.breakdown)

    @property
    def total(self):
        return sum(row.H for row in self.rows)

    def totals_by_content(self):
        out = {}
        for row in self.rows:
            for d, n in row.breakdown:
                out[d] = out.get(d, 0) + n
        return out

    def merge(self, other):
        rows = sorted(self.rows + other.rows, key=lambda r: r.p)
        return CensusTable(tuple(rows))


def _rows_from_counts(primes, H, extras):
    """Assemble CensusRows from a count vector and a {(p, d): n} dict, d > 1."""
    by_p = {}
    for (p, d), n in extras.items():
        by_p.setdefault(p, {})[d] = n
    rows = []
    for p in primes:
        p = int(p)
        total = int(H[p])
        if total == 0:
            continue
        imp = by_p.get(p, {})
        breakdown = [(1, total - sum(imp.values()))]
        breakdown.extend(sorted(imp.items()))
        rows.append(CensusRow(p, total, tuple((d, n) for d, n in breakdown if n)))
    return rows


def census_enumeration(X, prime_lo=2, prime_hi=None):
    """CensusTable of H(1-4p) for primes p in [prime_lo, min(prime_hi, X)].

    Scans the reduced domain |b| <= a <= c (b >= 0 on the boundary) and buckets
    each lattice triple by p = a*c - (b^2-1)/4.
    """
    if X < 1:
        raise ValueError("need X >= 1")
    hi = X if prime_hi is None else min(prime_hi, X)
    lo = max(prime_lo, 2)
    if hi < lo:
        return CensusTable(())
    isprime = prime_mask(hi)
    H = np.zeros(hi + 1, dtype=np.int64)
    extras = {}
    amax = math.isqrt((4 * hi - 1) // 3)
    for a in range(1, amax + 1):
        bstart = -a if a % 2 == 1 else -a + 1
        for b in range(bstart, a + 1, 2):
            if b == -a:
                continue
            t = (b * b - 1) // 4
            cmin = max(a, -(-(lo + t) // a))
            cmax = (hi + t) // a
            if cmax < cmin:
                continue
            cs = np.arange(cmin, cmax + 1, dtype=np.int64)
            ps = a * cs - t
            keep = isprime[ps]
            if b < 0:
                keep &= cs != a
            cs, ps = cs[keep], ps[keep]
            if len(cs) == 0:
                continue
            np.add.at(H, ps, 1)
            g0 = math.gcd(a, b)
            if g0 > 1:
                g = np.gcd(g0, cs)
                imp = g > 1
                for p, d in zip(ps[imp].tolist(), g[imp].tolist()):
                    extras[(p, d)] = extras.get((p, d), 0) + 1
    primes = primes_upto(hi)
    primes = primes[primes >= lo]
    return CensusTable(tuple(_rows_from_counts(primes, H, extras)))
