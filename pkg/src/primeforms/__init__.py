"""Counting SL2(Z)-classes of positive definite integral binary quadratic
forms of discriminant 1-4p over primes p <= X, by three independent methods
(lattice enumeration, the divisor parametrization ac = k^2 + k + p, and the
analytic class number formula), together with the asymptotic main terms and
certified constant identities that the count converges to.
"""

from .arith import (
    Factorization,
    IntervalValue,
    PrimeRange,
    euler_product,
    factorize,
    kronecker,
    mu_phi,
    sieve_primes,
    sigma_z,
    squarefree_decompose,
)
from .forms import (
    CensusRow,
    CensusTable,
    QuadForm,
    UnimodularMap,
    census_enumeration,
    class_numbers,
    discriminant,
    enumerate_reduced,
    reduce_form,
)
from .congruence import (
    DiscrepancyReport,
    QuadraticPoly,
    RootSet,
    census_divisor,
    count_roots_jacobi,
    discrepancy_exact,
    rho_h,
    root_multiset,
    roots_mod_n,
    s_f_window,
    weyl_partial_sum,
)
from .lfunc import (
    LTableRow,
    TruncatedL,
    a_coeff,
    census_classnumber,
    f_d_value,
    h_from_formula,
    l_one_truncated,
    q_d_exact,
    t_d_exact,
)
from .asymptotics import (
    ConstantReport,
    MainTermBundle,
    artin_constant,
    c_of_d,
    constant_suite,
    li,
    main_terms,
    sqrtlog_integral,
)

__version__ = "0.1.0"

__all__ = [
    "Factorization", "IntervalValue", "PrimeRange", "euler_product",
    "factorize", "kronecker", "mu_phi", "sieve_primes", "sigma_z",
    "squarefree_decompose",
    "CensusRow", "CensusTable", "QuadForm", "UnimodularMap",
    "census_enumeration", "class_numbers", "discriminant",
    "enumerate_reduced", "reduce_form",
    "DiscrepancyReport", "QuadraticPoly", "RootSet", "census_divisor",
    "count_roots_jacobi", "discrepancy_exact", "rho_h", "root_multiset",
    "roots_mod_n", "s_f_window", "weyl_partial_sum",
    "LTableRow", "TruncatedL", "a_coeff", "census_classnumber", "f_d_value",
    "h_from_formula", "l_one_truncated", "q_d_exact", "t_d_exact",
    "ConstantReport", "MainTermBundle", "artin_constant", "c_of_d",
    "constant_suite", "li", "main_terms", "sqrtlog_integral",
]
