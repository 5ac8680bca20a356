"""Walk through a complete search on a small two-variable polynomial.

    python demos/worked_example.py
"""

from fractions import Fraction

from subtropical.engine import certificate_encloses_zero, construct_zero, find_zero
from subtropical.parser import parse_polynomial, render_polynomial
from subtropical.poly import laurent_substitute, support_partition
from subtropical.realroot import approximate, refine

f = parse_polynomial("-2*x1^5 + x1^2*x2 - 3*x1^2 - x2^3 + 2*x2^2")
print("f =", render_polynomial(f))
print("f(1, 1) =", f(1, 1), "(negative, so no normalization is needed)")

part = support_partition(f)
print("positive support points, in the order they are tried:", part.pos)

out = find_zero(f)
w = out.witness
print(f"\nstatus: {out.status}")
print(f"candidate {w.candidate} separated by n = {w.n}, c = {w.c}")
print(f"t = {w.t}: f at {tuple(str(x) for x in w.point.to_fractions())} is {w.value}")
print(f"{out.stats.lp_solves} LP solves, {out.stats.doubling_steps} doublings")

cert = out.certificate
print("\nrestriction to the segment towards (1, 1), denominators cleared:")
print("  gbar =", cert.gbar)
print("  root r ~", approximate(cert.r, 8))
for name, z in zip(f.variables, cert.coords):
    print(f"  {name} ~ {approximate(z, 8)}  root of {z.defining}")
for k in (10, 20, 30):
    print(f"  f encloses 0 over the box of width 2^-{k}:", certificate_encloses_zero(f, cert, Fraction(1, 2**k)))

# a hand-picked normal gives the classic small witness (1/8, 1/4)
print("\nwith n = (-3, -2) fixed by hand:")
print("  f(2^-3, 2^-2) =", laurent_substitute(f, (-3, -2))(2))
cert = construct_zero(f, (Fraction(1, 8), Fraction(1, 4)), (1, 1))
print("  gbar =", cert.gbar)
lo, hi = refine(cert.r, Fraction(1, 100)).bounds()
print(f"  r in ]{float(lo):.4f}, {float(hi):.4f}[")
for name, z in zip(f.variables, cert.coords):
    print(f"  {name}: {z.defining}, ~ {approximate(z, 6)}")
