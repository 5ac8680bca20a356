"""Looking outside the positive orthant.

General mode may flip the sign of one coordinate.  Orthant, range and
difference transforms move the search to other regions; results are mapped
back to the input variables.

    python demos/general_mode_and_transforms.py
"""

import json
from fractions import Fraction

from subtropical.cli import RunConfig, solve_polynomial
from subtropical.engine import GENERAL, POSITIVE, find_zero
from subtropical.parser import parse_polynomial


def show(text, **kw):
    f = parse_polynomial(text)
    report, payload = solve_polynomial(f, RunConfig(**kw), name=text)
    zero = payload["zero"]
    where = "" if zero is None else "  at (" + ", ".join(z["approx"] for z in zero) + ")"
    print(f"{text:<22} {str(kw):<55} {report.status}{where}")


# -x^3 - 1 is negative for x > 0, but general mode tries x < 0 as well
f = parse_polynomial("-x^3 - 1")
print("positive mode:", find_zero(f, POSITIVE).status)
out = find_zero(f, GENERAL)
print("general mode: ", out.status, "with coordinate", out.witness.mu, "negated")

print()
show("x + y + 3")
show("x + y + 3", orthant=(-1, -1))
show("x^2 - 2", range_transforms=(("x", "upper", Fraction(0)),))
show("x^2 - 2", range_transforms=(("x", "lower", Fraction(-1)),))
show("x + 5", difference=True)
# (x - y)^2 + 1 has no real zero, so every mode must fail
show("x^2 - 2*x*y + y^2 + 1", mode=GENERAL)

print("\nJSON for the last orthant search:")
_, payload = solve_polynomial(parse_polynomial("x + y + 3"), RunConfig(orthant=(-1, -1)), name="demo")
print(json.dumps(payload, indent=2))
