"""Isolating real roots in ]0, 1[ and working with real algebraic numbers.

    python demos/root_isolation.py
"""

from fractions import Fraction

from subtropical.poly import UniPoly
from subtropical.realroot import (
    RealAlgebraicNumber,
    affine_image,
    approximate,
    isolate_in_unit_interval,
    refine,
    sturm_count,
)

# (2y - 1)(5y^2 - 5y + 1): a rational root at 1/2 and two irrational ones
p = UniPoly([-1, 7, -15, 10])
print("p =", p)
roots = isolate_in_unit_interval(p)
for r in roots:
    print("  ", r, "~", approximate(r, 10))
print("Sturm count over ]0, 1[:", sturm_count(p, 0, 1))

# an isolating interval only ever shrinks
r = roots[0]
for w in (Fraction(1, 10), Fraction(1, 1000), Fraction(1, 10**9)):
    lo, hi = refine(r, w).bounds()
    print(f"  width <= {w}: ]{lo}, {hi}[")

# affine images keep an exact description
sqrt2 = RealAlgebraicNumber(UniPoly([-2, 0, 1]), (Fraction(1), Fraction(2)))
z = affine_image(sqrt2, Fraction(1, 3), Fraction(-2))
print("\n1/3 - 2*sqrt(2) is a root of", z.defining, "~", approximate(z, 12))
