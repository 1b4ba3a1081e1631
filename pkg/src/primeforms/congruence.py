"""Roots of quadratic congruences and their equidistribution statistics.

Hensel-based root solving mod n, the Jacobi divisor-sum root count on its
valid (odd squarefree) domain, window counts S_f(alpha, beta; n), Weyl sums
rho_h(n), exact interval discrepancy D_f(X), and the divisor-method census.
"""

from dataclasses import dataclass
from fractions import Fraction
import cmath
import math

import numpy as np

from .arith import factorize, kronecker, prime_mask, primes_upto, spf_table
from .forms import CensusTable, _rows_from_counts


@dataclass(frozen=True)
class QuadraticPoly:
    """f(x) = A x^2 + B x + C, irreducible over Q."""

    A: int
    B: int
    C: int

    def __post_init__(self):
        if self.A == 0:
            raise ValueError("A must be nonzero")
        d = self.disc
        if d >= 0 and math.isqrt(d) ** 2 == d:
            raise ValueError("polynomial is reducible (square discriminant)")

    @property
    def disc(self):
        return self.B * self.B - 4 * self.A * self.C

    def evaluate(self, x):
        return (self.A * x + self.B) * x + self.C

    def derivative(self, x):
        return 2 * self.A * x + self.B


@dataclass(frozen=True)
class RootSet:
    n: int
    roots: tuple  # sorted residues v in [0, n) with f(v) = 0 mod n


@dataclass(frozen=True)
class DiscrepancyReport:
    X: int
    total_points: int
    sup_discrepancy: float
    argmax_interval: tuple  # (alpha, beta) as Fractions


def _sqrt_mod_prime(a, p):
    """Square roots of a mod odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return [0]
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
        return sorted({x, p - x})
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return sorted({x, p - x})


def _roots_mod_prime(f, p):
    """Sorted roots of f mod prime p."""
    if p == 2:
        return sorted(x for x in (0, 1) if f.evaluate(x) % 2 == 0)
    A = f.A % p
    if A == 0:
        B, C = f.B % p, f.C % p
        if B == 0:
            return list(range(p)) if C == 0 else []
        return [(-C) * pow(B, -1, p) % p]
    inv2a = pow(2 * A, -1, p)
    return sorted((-f.B + s) * inv2a % p for s in _sqrt_mod_prime(f.disc, p))


def _lift_roots(f, p, roots, q, q_next):
    """Lift roots mod q to roots mod q_next = q*p (Hensel; singular case by
    explicit enumeration of the p candidate lifts)."""
    out = []
    for r in roots:
        fr = f.evaluate(r)
        fp = f.derivative(r) % p
        if fp != 0:
            t = (-(fr // q)) * pow(fp, -1, p) % p
            out.append(r + t * q)
        else:
            if fr % q_next == 0:
                out.extend(r + t * q for t in range(p))
    return sorted(out)


def _roots_prime_power(f, p, e):
    roots = _roots_mod_prime(f, p)
    q = p
    for _ in range(e - 1):
        roots = _lift_roots(f, p, roots, q, q * p)
        q *= p
    return roots


def roots_mod_n(f, n):
    """Complete sorted RootSet of f mod n (factor, lift, CRT recombine)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        return RootSet(1, (0,))
    roots = [0]
    mod = 1
    for p, e in factorize(n).factors:
        q = p**e
        rq = _roots_prime_power(f, p, e)
        if not rq:
            return RootSet(n, ())
        inv = pow(mod % q, -1, q) if mod % q else None
        merged = []
        for a in roots:
            for b in rq:
                merged.append(a + mod * ((b - a) * inv % q))
        roots = merged
        mod *= q
    return RootSet(n, tuple(sorted(roots)))


def count_roots_jacobi(a, D):
    """Sum over m | a of kronecker(D, m), for odd squarefree a.

    On this domain it equals |roots of x^2 + x + (1-D)/4 mod a|; it fails for
    general a, so non-squarefree or even inputs are rejected.
    """
    if a % 2 == 0:
        raise ValueError("a must be odd")
    if D >= 0 or D % 4 != 1:
        raise ValueError("need D < 0 with D = 1 mod 4")
    f = factorize(a)
    if any(e > 1 for _, e in f.factors):
        raise ValueError("a must be squarefree")
    return sum(kronecker(D, m) for m in f.divisors())


def s_f_window(f, n, alpha, beta):
    """Count roots v of f mod n with alpha*n <= v <= beta*n."""
    if not (0 <= alpha <= beta <= 1):
        raise ValueError("need 0 <= alpha <= beta <= 1")
    rs = roots_mod_n(f, n)
    return sum(1 for v in rs.roots if alpha * n <= v <= beta * n)


def rho_h(f, n, h):
    """Weyl sum rho_h(n) = sum over roots v of exp(2 pi i h v / n)."""
    rs = roots_mod_n(f, n)
    return sum(cmath.exp(2j * math.pi * h * v / n) for v in rs.roots)


# ---------------------------------------------------------------------------
# Batch root sieve over all moduli n <= X


def root_multiset(f, X):
    """All pairs (n, v) with n <= X and f(v) = 0 mod n, as int64 arrays.

    Prime powers are solved by lifting, composites by CRT along the smallest
    prime factor; equivalent to calling roots_mod_n for every n, but shared.
    """
    if X < 1:
        raise ValueError("need X >= 1")
    spf = spf_table(X)[: X + 1].tolist()
    ppow = {}
    for p in range(2, X + 1):
        if spf[p] != p:
            continue
        roots = _roots_mod_prime(f, p)
        ppow[p] = roots
        q = p
        while q * p <= X:
            roots = _lift_roots(f, p, roots, q, q * p)
            q *= p
            ppow[q] = roots
    all_roots = [None] * (X + 1)
    all_roots[1] = [0]
    ns, vs = [1], [0]
    for n in range(2, X + 1):
        p = spf[n]
        q = p
        m = n // p
        while m % p == 0:
            q *= p
            m //= p
        if m == 1:
            rn = ppow[q]
        else:
            rq = ppow[q]
            rm = all_roots[m]
            if rq and rm:
                inv = pow(q % m, -1, m)
                rn = [a + q * ((b - a) * inv % m) for a in rq for b in rm]
            else:
                rn = []
        all_roots[n] = rn
        ns.extend([n] * len(rn))
        vs.extend(rn)
    return np.array(ns, dtype=np.int64), np.array(vs, dtype=np.int64)


def _group_points(ns, vs):
    """Group the multiset {v/n} by exact rational value.

    Returns (values as list of (num, den) in increasing order, weights).
    """
    if len(ns) == 0:
        return [], []
    g = np.gcd(vs, ns)
    num = vs // g
    den = ns // g
    order = np.argsort(num / den, kind="stable")
    num, den = num[order].tolist(), den[order].tolist()
    values, weights = [], []
    for u, q in zip(num, den):
        if values and values[-1] == (u, q):
            weights[-1] += 1
        elif values and values[-1][0] * q == u * values[-1][1]:
            # same rational, different float path (cannot happen for den <= 1e6
            # but kept for exactness)
            weights[-1] += 1
        else:
            if values and values[-1][0] * q > u * values[-1][1]:
                raise AssertionError("float ordering key collision")
            values.append((u, q))
            weights.append(1)
    return values, weights


def sup_discrepancy_exact(values, weights):
    """Exact sup over intervals [alpha, beta] of |count - length * total|.

    values: increasing exact rationals (num, den) in [0, 1]; weights: positive
    multiplicities. Returns (sup as Fraction, (alpha, beta) as Fractions).
    The sup is attained with closed endpoints at sample points (excess) or as
    an open limit between them (deficit); both scans are exact.
    """
    pts = [(Fraction(u, q), w) for (u, q), w in zip(values, weights)]
    if not pts or pts[0][0] != 0:
        pts.insert(0, (Fraction(0), 0))
    if pts[-1][0] != 1:
        pts.append((Fraction(1), 0))
    T = sum(w for _, w in pts)
    best = Fraction(-1)
    best_iv = (Fraction(0), Fraction(0))
    # excess: closed [x_i, x_j], count C_j - C_{i-1}
    cum = 0
    best_start = None  # max over i <= j of T*x_i - C_{i-1}, with its x_i
    for x, w in pts:
        cand_start = T * x - cum
        if best_start is None or cand_start > best_start[0]:
            best_start = (cand_start, x)
        cum += w
        val = cum - T * x + best_start[0]
        if val > best:
            best = val
            best_iv = (best_start[1], x)
    # deficit: open (x_i, x_j), count strictly between
    cum = 0
    best_open = None  # max over i < j of C_i - T*x_i, with its x_i
    for x, w in pts:
        if best_open is not None:
            val = T * x - cum + best_open[0]
            if val > best:
                best = val
                best_iv = (best_open[1], x)
        cand = cum + w - T * x
        if best_open is None or cand > best_open[0]:
            best_open = (cand, x)
        cum += w
    if best < 0:
        best = Fraction(0)
    return best, best_iv


def discrepancy_exact(f, X, _points=None):
    """Exact interval discrepancy D_f(X) of the root fractions v/n, n <= X.

    _points is a test hook: an (ns, vs) pair of arrays to use instead of the
    root multiset of f.
    """
    if X < 1:
        raise ValueError("need X >= 1")
    if _points is not None:
        ns, vs = _points
        ns, vs = np.asarray(ns, dtype=np.int64), np.asarray(vs, dtype=np.int64)
    else:
        ns, vs = root_multiset(f, X)
    keep = ns <= X
    ns, vs = ns[keep], vs[keep]
    values, weights = _group_points(ns, vs)
    sup, iv = sup_discrepancy_exact(values, weights)
    return DiscrepancyReport(X, int(len(ns)), float(sup), iv)


@dataclass(frozen=True)
class WeylSum:
    value: complex
    bound_ratio: float  # |value| / (|h|^{4/5} sigma_{-1/2}(h)^2 X^{4/5} log(X)^2)


def weyl_partial_sum(f, h, X):
    """Sum over n <= X of rho_h(n), with the empirical bound ratio."""
    from .arith import sigma_z

    if X < 1:
        raise ValueError("need X >= 1")
    ns, vs = root_multiset(f, X)
    if h == 0:
        total = complex(len(ns))
    else:
        total = complex(np.sum(np.exp((2j * math.pi * h) * (vs / ns))))
    if h == 0 or X < 2:
        ratio = math.nan
    else:
        s = sigma_z(factorize(abs(h)), -0.5)
        ratio = abs(total) / (
            abs(h) ** 0.8 * s * s * X**0.8 * math.log(X) ** 2
        )
    return WeylSum(total, ratio)


# ---------------------------------------------------------------------------
# Divisor-method census


def census_divisor(X, prime_lo=2, prime_hi=None):
    """CensusTable via ac = k^2 + k + p, b = 2k + 1.

    For each modulus a, the residues r = -(k^2 + k) mod a index the complete
    root set of k^2 + k + p = 0 mod a by p mod a; roots are shifted into the
    symmetric window |2k + 1| <= a and counted when a <= c with the boundary
    normalization of the forms module.
    """
    if X < 1:
        raise ValueError("need X >= 1")
    hi = X if prime_hi is None else min(prime_hi, X)
    lo = max(prime_lo, 2)
    if hi < lo:
        return CensusTable(())
    primes = primes_upto(hi)
    primes = primes[primes >= lo]
    H = np.zeros(hi + 1, dtype=np.int64)
    extras = {}
    amax = math.isqrt((4 * hi - 1) // 3)
    for a in range(1, amax + 1):
        k0 = np.arange(a, dtype=np.int64)
        r = (-(k0 * k0) - k0) % a
        order = np.argsort(r, kind="stable")
        r_sorted = r[order]
        starts = np.searchsorted(r_sorted, np.arange(a + 1))
        counts = np.diff(starts)
        pr = primes % a
        nroots = counts[pr]
        has = nroots > 0
        ps_rep = np.repeat(primes[has], nroots[has])
        offs = np.concatenate([np.arange(c) for c in nroots[has]]) if has.any() else np.array([], dtype=np.int64)
        base = starts[pr[has]]
        k_idx = np.repeat(base, nroots[has]) + offs
        k = k0[order][k_idx]
        k = np.where(2 * k + 1 > a, k - a, k)
        b = 2 * k + 1
        c = (k * k + k + ps_rep) // a
        keep = (c >= a) & ~((c == a) & (b < 0))
        ps_rep, b, c = ps_rep[keep], b[keep], c[keep]
        if len(ps_rep) == 0:
            continue
        np.add.at(H, ps_rep, 1)
        g = np.gcd(np.gcd(np.int64(a), np.abs(b)), c)
        imp = g > 1
        for p, d in zip(ps_rep[imp].tolist(), g[imp].tolist()):
            extras[(p, d)] = extras.get((p, d), 0) + 1
    return CensusTable(tuple(_rows_from_counts(primes, H, extras)))


def census_divisor_reference(X):
    """Literal per-(a, p) construction through roots_mod_n; small X only."""
    rows_H = {}
    extras = {}
    primes = [int(p) for p in primes_upto(X)]
    for p in primes:
        rows_H[p] = 0
        f = QuadraticPoly(1, 1, p)
        amax = math.isqrt((4 * p - 1) // 3)
        for a in range(1, amax + 1):
            for k in roots_mod_n(f, a).roots:
                if 2 * k + 1 > a:
                    k -= a
                b = 2 * k + 1
                if abs(b) > a:
                    continue
                c = (k * k + k + p) // a
                if c < a or (c == a and b < 0):
                    continue
                rows_H[p] += 1
                g = math.gcd(math.gcd(a, abs(b)), c)
                if g > 1:
                    extras[(p, g)] = extras.get((p, g), 0) + 1
    H = np.zeros(X + 1, dtype=np.int64)
    for p, n in rows_H.items():
        H[p] = n
    return CensusTable(tuple(_rows_from_counts(np.array(primes), H, extras)))
