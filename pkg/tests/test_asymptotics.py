import math
from fractions import Fraction

import pytest

from primeforms.asymptotics import (
    artin_constant,
    c_of_d,
    c_partial_sum,
    constant_suite,
    li,
    main_terms,
    mu_phi_odd_sum,
    odd_cubic_product,
    odd_square_product,
    sqrtlog_integral,
)


def test_c_of_d_examples():
    assert c_of_d(1) == 1
    assert c_of_d(2) == 0
    assert c_of_d(3) == Fraction(26, 27 * 14)
    assert c_of_d(3) == Fraction(13, 189)
    assert c_of_d(9) == Fraction(26, 729 * 14)
    with pytest.raises(ValueError):
        c_of_d(0)


def test_c_of_d_multiplicative():
    # multiplicative on coprime arguments
    assert c_of_d(15) == c_of_d(3) * c_of_d(5)
    assert c_of_d(15) == Fraction(
        (3**3 - 1) * (5**3 - 1),
        15**3 * (3**3 - 3**2 - 3 - 1) * (5**3 - 5**2 - 5 - 1),
    )
    for d in (21, 33, 45, 105):
        expect = Fraction(1, d**3)
        dd = d
        for ell in (3, 5, 7, 11):
            if dd % ell == 0:
                expect *= Fraction(ell**3 - 1, ell**3 - ell**2 - ell - 1)
        assert c_of_d(d) == expect


def test_artin_constant_enclosure():
    iv = artin_constant(1e-8)
    assert iv.width < 1e-8
    assert iv.contains(0.3739558136)
    loose = artin_constant(1e-6)
    assert loose.lo - 1e-15 <= iv.lo and iv.hi <= loose.hi + 1e-15
    with pytest.raises(ValueError):
        artin_constant(1e-13)


def test_named_products():
    two_art = artin_constant(1e-8) * type(artin_constant(1e-8)).point(2.0)
    odd_sq = odd_square_product()
    assert odd_sq.intersects(two_art)
    podd = odd_cubic_product()
    assert podd.contains(0.6869450329)
    assert podd.width < 1e-6


def test_li_examples():
    assert li(2) == 0.0
    assert abs(li(10) - 5.12043) < 1e-3
    assert abs(li(10**6) - 78626.5) < 1.0
    with pytest.raises(ValueError):
        li(1.5)


def test_sqrtlog_integral_by_parts():
    # d/dt [ (2/3) t^{3/2} / log t ] = sqrt t / log t - (2/3) sqrt t / log^2 t,
    # so I(X) = (2/3) X^{3/2}/log X - (2/3) 2^{3/2}/log 2 + (2/3) J(X) with
    # J(X) = int_2^X sqrt t / log^2 t dt; verify the rearrangement numerically
    from primeforms.asymptotics import _adaptive_simpson

    X = 10**5
    I, errI = sqrtlog_integral(X)
    J, errJ = _adaptive_simpson(
        lambda t: math.sqrt(t) / math.log(t) ** 2, 2.0, float(X), 1e-6
    )
    boundary = (2.0 / 3.0) * (X**1.5 / math.log(X) - 2**1.5 / math.log(2))
    assert abs(I - (boundary + (2.0 / 3.0) * J)) < 1e-4 * I
    assert errI < 1e-6 * I


def test_quadrature_tolerance_scaling():
    X = 10**4
    v1, e1 = sqrtlog_integral(X, rel_tol=1e-6)
    v2, e2 = sqrtlog_integral(X, rel_tol=1e-10)
    assert abs(v1 - v2) <= e1 + e2 + 1e-12
    assert e2 < e1


def test_main_terms_invariants():
    b = main_terms(10**6)
    assert 1.0 < b.mt_integral / b.mt_simple < 1.2
    assert b.quad_error < 1e-6 * b.mt_integral
    smaller = main_terms(10**5)
    assert smaller.mt_simple < b.mt_simple
    assert smaller.mt_integral < b.mt_integral
    ds = [d for d, _, _ in b.per_d]
    assert ds == [1, 3, 5]
    for _, t_main, q_main in b.per_d:
        assert t_main > 0 and q_main > 0
    with pytest.raises(ValueError):
        main_terms(5)


def test_per_content_main_terms_sum_to_total():
    # summing the Q_d main terms over many d approaches mt_integral, with the
    # gap controlled by the tail of sum c(d)
    contents = tuple(range(1, 1001, 2))
    b = main_terms(10**6, contents=contents)
    # P_odd * sum_d c(d) = 2 C_Art, so the full sum over d equals mt_integral
    total = math.fsum(q for _, _, q in b.per_d)
    c_sum, _ = c_partial_sum(10**6)
    covered = math.fsum(float(c_of_d(d)) for d in contents)
    missing_fraction = 1.0 - covered / c_sum
    assert missing_fraction < 1e-4
    assert abs(total - b.mt_integral) / b.mt_integral < missing_fraction + 1e-4


def test_mu_phi_odd_sum_matches_two_artin():
    s, tail = mu_phi_odd_sum(10**6)
    two_art = 2.0 * artin_constant(1e-8).mid
    assert abs(s - two_art) < 1e-6
    assert tail > 0
    # the tail bound must dominate the cutoff sensitivity
    s_small, _ = mu_phi_odd_sum(10**5)
    assert abs(s_small - s) < 2e-5


def test_c_partial_sum_matches_closed_form():
    s, tail = c_partial_sum(10**6)
    from primeforms.asymptotics import c_sum_closed_form

    closed = c_sum_closed_form()
    assert abs(s - closed.mid) < 1e-9 + tail
    # direct partial sum cross-check at a small cutoff
    direct = math.fsum(float(c_of_d(d)) for d in range(1, 2000, 2))
    s2, _ = c_partial_sum(1999)
    assert abs(direct - s2) < 1e-12


def test_constant_suite_passes():
    report = constant_suite(prime_cutoff=5 * 10**7, sum_cutoff=10**6)
    assert report.all_passed
    names = [c.name for c in report.checks]
    assert "two_artin_vs_odd_square_product" in names
    assert "enclosure_width_below_1e-8" in names
    for c in report.checks:
        assert c.gap <= c.tolerance or c.passed
