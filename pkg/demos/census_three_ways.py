"""Count form classes at discriminants 1 - 4p by all three routes and watch
the running total approach the X^{3/2}/log X prediction."""

from primeforms import census_classnumber, census_divisor, census_enumeration
from primeforms.asymptotics import main_terms

X = 20000

enum = census_enumeration(X)
div = census_divisor(X)
cls = census_classnumber(X)
assert enum.rows == div.rows == cls.rows
print(f"Q({X}) = {enum.total} (three independent methods agree)")

for x in (100, 1000, 10000, X):
    q = sum(r.H for r in enum.rows if r.p <= x)
    b = main_terms(x)
    print(f"X = {x:>6}  Q = {q:>6}  main term = {b.mt_integral:10.1f}  "
          f"ratio = {q / b.mt_integral:.4f}")

by_d = enum.totals_by_content()
print("split by form content d:", dict(sorted(by_d.items())))
