"""Which support points can be cut off by a hyperplane?

For every positive support point we build the separation system and solve it
exactly.  A feasible system gives an integer normal; an infeasible one means
the point lies in the convex hull of the others.

    python demos/lp_separation.py
"""

from subtropical.lp import build_system, lpsolve, simplex_feasible
from subtropical.parser import parse_polynomial
from subtropical.poly import support_partition

f = parse_polynomial("-2*x1^5 + x1^2*x2 - 3*x1^2 - x2^3 + 2*x2^2")
part = support_partition(f)
points = [p for p in f.terms if any(p)]

for cand in part.pos:
    others = [p for p in points if p != cand]
    system = build_system(part, cand, others)
    print(f"candidate {cand}: rows (last entry is the c column)")
    for row in system.rows:
        print("   ", row)
    stats = {}
    out = simplex_feasible(system, stats=stats)
    print(f"  feasible: {out.feasible} after {stats['pivots']} pivots")
    if out.feasible:
        sol = lpsolve(system)
        print(f"  integer normal n = {sol.n}, c = {sol.c}")
        print("  check: every row is at most -1:", system.satisfied_by(list(sol.n) + [sol.c]))
    print()

# a point inside the hull: (1, 1) sits between (0, 0), (2, 0), (0, 2) and (2, 2)
g = parse_polynomial("x*y - 1 - x^2 - y^2 - x^2*y^2")
part = support_partition(g)
others = [p for p in g.terms if any(p) and p != (1, 1)]
print("x*y inside the hull of the other monomials; feasible:",
      simplex_feasible(build_system(part, (1, 1), others)).feasible)
