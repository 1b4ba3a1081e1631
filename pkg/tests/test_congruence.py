import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from primeforms import arith
from primeforms.congruence import (
    QuadraticPoly,
    census_divisor,
    census_divisor_reference,
    count_roots_jacobi,
    discrepancy_exact,
    rho_h,
    root_multiset,
    roots_mod_n,
    s_f_window,
    sup_discrepancy_exact,
    weyl_partial_sum,
    _group_points,
)
from primeforms.forms import census_enumeration


def brute_roots(f, n):
    return tuple(v for v in range(n) if f.evaluate(v) % n == 0)


def test_poly_validation():
    with pytest.raises(ValueError):
        QuadraticPoly(0, 1, 1)
    with pytest.raises(ValueError):
        QuadraticPoly(1, 0, -1)  # x^2 - 1 is reducible
    QuadraticPoly(1, 1, 17)
    QuadraticPoly(1, 0, -2)  # irrational roots are fine


def test_roots_examples():
    f = QuadraticPoly(1, 1, 2)
    assert roots_mod_n(f, 1).roots == (0,)
    assert roots_mod_n(f, 7).roots == (3,)
    assert roots_mod_n(f, 11).roots == (4, 6)
    assert roots_mod_n(f, 49).roots == ()


def test_roots_brute_force_all_n():
    for c in (2, 3, 5, 7, 11, 17):
        f = QuadraticPoly(1, 1, c)
        for n in range(1, 600):
            assert roots_mod_n(f, n).roots == brute_roots(f, n), (c, n)


def test_roots_brute_force_sampled_large_n(rng):
    for c in (2, 5, 17):
        f = QuadraticPoly(1, 1, c)
        for _ in range(60):
            n = int(rng.integers(600, 10**4))
            assert roots_mod_n(f, n).roots == brute_roots(f, n), (c, n)


def test_roots_general_leading_coefficient():
    f = QuadraticPoly(6, 1, 2)
    for n in range(1, 300):
        assert roots_mod_n(f, n).roots == brute_roots(f, n), n


def test_root_count_multiplicative(rng):
    f = QuadraticPoly(1, 1, 11)
    for _ in range(200):
        m = int(rng.integers(1, 300))
        n = int(rng.integers(1, 300))
        if math.gcd(m, n) != 1:
            continue
        assert len(roots_mod_n(f, m * n).roots) == len(
            roots_mod_n(f, m).roots
        ) * len(roots_mod_n(f, n).roots)


def test_count_roots_jacobi_examples():
    assert count_roots_jacobi(7, -7) == 1
    assert count_roots_jacobi(11, -7) == 2
    assert count_roots_jacobi(15, -7) == 0
    with pytest.raises(ValueError):
        count_roots_jacobi(9, -7)
    with pytest.raises(ValueError):
        count_roots_jacobi(4, -7)


def test_count_roots_jacobi_matches_hensel():
    primes = [int(p) for p in arith.primes_upto(100)]
    for a in range(1, 1000, 2):
        fa = arith.factorize(a)
        if any(e > 1 for _, e in fa.factors):
            continue
        for p in primes:
            f = QuadraticPoly(1, 1, p)
            assert count_roots_jacobi(a, 1 - 4 * p) == len(
                roots_mod_n(f, a).roots
            ), (a, p)


def test_s_f_window():
    f = QuadraticPoly(1, 1, 2)
    assert s_f_window(f, 11, 0, 1) == 2
    assert s_f_window(f, 11, 0, 0.5) == 1
    assert s_f_window(f, 49, 0, 1) == 0
    with pytest.raises(ValueError):
        s_f_window(f, 11, 0.5, 0.2)


def test_rho_h():
    f = QuadraticPoly(1, 1, 2)
    assert rho_h(f, 7, 0) == pytest.approx(1.0)
    assert rho_h(f, 1, 5) == pytest.approx(1.0)
    want = cmath.exp(2j * math.pi * 3 / 7)
    assert rho_h(f, 7, 1) == pytest.approx(want)
    for n in (3, 11, 35, 77):
        assert abs(rho_h(f, n, 0) - len(roots_mod_n(f, n).roots)) < 1e-12


def test_weyl_partial_sum():
    f = QuadraticPoly(1, 1, 2)
    w0 = weyl_partial_sum(f, 0, 50)
    direct_total = sum(len(roots_mod_n(f, n).roots) for n in range(1, 51))
    assert w0.value == pytest.approx(direct_total)
    assert weyl_partial_sum(f, 3, 1).value == pytest.approx(1.0)
    w = weyl_partial_sum(f, 1, 1000)
    direct = sum(rho_h(f, n, 1) for n in range(1, 1001))
    assert w.value == pytest.approx(direct, abs=1e-7)
    assert w.bound_ratio > 0 and math.isfinite(w.bound_ratio)


def test_root_multiset_matches_per_n():
    f = QuadraticPoly(1, 1, 17)
    ns, vs = root_multiset(f, 400)
    got = {}
    for n, v in zip(ns.tolist(), vs.tolist()):
        got.setdefault(n, []).append(v)
    for n in range(1, 401):
        assert tuple(sorted(got.get(n, []))) == brute_roots(f, n), n


def brute_sup_discrepancy(values, weights):
    """O(G^2) scan over all candidate interval endpoints, exact."""
    xs = [Fraction(u, q) for u, q in values]
    ws = list(weights)
    if not xs or xs[0] != 0:
        xs.insert(0, Fraction(0))
        ws.insert(0, 0)
    if xs[-1] != 1:
        xs.append(Fraction(1))
        ws.append(0)
    T = sum(ws)
    cum = [0]
    for w in ws:
        cum.append(cum[-1] + w)
    best = Fraction(0)
    for i in range(len(xs)):
        for j in range(i, len(xs)):
            length = T * (xs[j] - xs[i])
            closed = cum[j + 1] - cum[i]
            best = max(best, closed - length)
            open_count = cum[j] - cum[i + 1]
            if j > i:
                best = max(best, length - open_count)
    return best


def test_discrepancy_point_mass():
    rep = discrepancy_exact(QuadraticPoly(1, 1, 2), 1)
    assert rep.total_points == 1
    assert rep.sup_discrepancy == 1.0
    assert rep.argmax_interval == (Fraction(0), Fraction(0))


def test_discrepancy_uniform_synthetic():
    k = 64
    ns = np.full(k, k, dtype=np.int64)
    vs = np.arange(k, dtype=np.int64)
    rep = discrepancy_exact(QuadraticPoly(1, 1, 2), k, _points=(ns, vs))
    assert rep.total_points == k
    assert rep.sup_discrepancy <= 1.0 + 1e-12


def test_discrepancy_matches_brute_force():
    for c in (2, 17):
        f = QuadraticPoly(1, 1, c)
        for X in (1, 2, 10, 50, 113, 200):
            ns, vs = root_multiset(f, X)
            values, weights = _group_points(ns, vs)
            want = brute_sup_discrepancy(values, weights)
            got, _ = sup_discrepancy_exact(values, weights)
            assert got == want, (c, X)
            rep = discrepancy_exact(f, X)
            assert rep.sup_discrepancy == float(want)


def test_discrepancy_bounds():
    f = QuadraticPoly(1, 1, 17)
    rep = discrepancy_exact(f, 1000)
    assert 0 <= rep.sup_discrepancy <= rep.total_points


def test_census_divisor_small():
    assert census_divisor(1).total == 0
    assert census_divisor(2).total == 1
    assert census_divisor(10).total == 5


def test_census_divisor_equals_enumeration():
    for X in (10, 100, 1000, 10**4):
        assert census_divisor(X).rows == census_enumeration(X).rows


def test_census_divisor_equals_enumeration_1e5(census_enum_1e5, census_div_1e5):
    # per-prime rows at 10^5 imply equality of totals for every X <= 10^5
    assert census_div_1e5.rows == census_enum_1e5.rows


def test_census_divisor_reference_path():
    assert census_divisor_reference(2000).rows == census_divisor(2000).rows


def test_block_split_is_exact():
    full = census_divisor(3000)
    merged = census_divisor(3000, 2, 977).merge(census_divisor(3000, 978, 3000))
    assert full.rows == merged.rows
