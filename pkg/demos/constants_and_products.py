"""The constants behind the main term, each as a certified enclosure, plus
the identities tying them together."""

from primeforms.asymptotics import (
    artin_constant,
    c_of_d,
    c_partial_sum,
    constant_suite,
    mu_phi_odd_sum,
    odd_cubic_product,
    odd_square_product,
)

art = artin_constant(1e-8)
print(f"C_Art              in [{art.lo:.12f}, {art.hi:.12f}]")
print(f"prod odd (1-1/(l^2-l)) = [{odd_square_product().lo:.12f}, "
      f"{odd_square_product().hi:.12f}]  (equals 2 C_Art)")
print(f"P_odd              in [{odd_cubic_product().lo:.12f}, "
      f"{odd_cubic_product().hi:.12f}]")

s, tail = mu_phi_odd_sum()
print(f"sum mu(m)/(m phi(m)), odd m: {s:.12f} (+/- {tail:.2e} tail)")
c, ctail = c_partial_sum()
print(f"sum c(d):                    {c:.12f} (+/- {ctail:.2e} tail)")
print("c(d) for small odd d:", {d: c_of_d(d) for d in (1, 3, 5, 9, 15)})

report = constant_suite()
for check in report.checks:
    print(f"  {check.name}: gap {check.gap:.3e} "
          f"({'ok' if check.passed else 'FAILED'})")
