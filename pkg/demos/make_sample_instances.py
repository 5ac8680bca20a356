"""Write the bundled 20-instance sample directory used by the batch demo and tests.

Hand-written cases cover every outcome; the rest are seeded random sparse
polynomials in the style of mass-action systems (low per-variable degree,
mixed signs).  Run from the repository root:

    python demos/make_sample_instances.py
"""

import random
from pathlib import Path

from subtropical.parser import render_polynomial
from subtropical.poly import MultiPoly

OUT = Path(__file__).resolve().parent.parent / "data" / "sample_instances"

HAND_WRITTEN = {
    "01_worked_example.txt": "-2*x1^5+x1^2*x2-3*x1^2-x2^3+2*x2^2",
    "02_sum_of_squares.txt": "x^2 + y^2 + 1",
    "03_negative_linear.txt": "-x - y - 1",
    "04_through_ones.txt": "x*y - 1",
    "05_circle.txt": "x^2 + y^2 - 4",
    "06_hyperbola.txt": "x*y - 2",
    "07_constant_only_positive.txt": "1 - x - y",
    "08_mixed_cubic.txt": "x^3 - 2*x*y + y^2 - 5",
    "09_negative_constant.txt": "-7",
    "10_odd_power.txt": "x**3 - 3",
    # (x - y)^2 + 1 has no real zero at all
    "11_shifted_square.txt": "x^2 - 2*x*y + y^2 + 1",
    # has real zeros on x = y, but the positive term is not a vertex
    "12_hidden_zero.txt": "x^4 + y^4 - 3*x^2*y^2 + 2",
    "13_multiline.txt": "2 * a * b * c\n  - a^2 - b^2\n  - c ** 2 + 3\n",
}

# all generated instances share this variable pool; each uses a prefix of it
POOL = [f"k{i}" for i in range(8)]

rng = random.Random(20151)


def random_instance(d, terms, max_deg):
    acc = {}
    while len(acc) < terms:
        # low degrees are much more common, as in reaction networks
        p = tuple(min(max_deg, int(rng.expovariate(1.2))) for _ in range(d))
        acc[p] = rng.choice([-1, 1]) * rng.randint(1, 60)
    return MultiPoly(tuple(POOL[:d]), acc)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for name, text in HAND_WRITTEN.items():
        (OUT / name).write_text(text if text.endswith("\n") else text + "\n")
    shapes = [(3, 12, 4), (4, 25, 4), (5, 40, 5), (5, 60, 6), (6, 90, 6), (7, 150, 6), (8, 400, 8)]
    for i, (d, terms, deg) in enumerate(shapes, start=len(HAND_WRITTEN) + 1):
        f = random_instance(d, terms, deg)
        (OUT / f"{i:02d}_random_d{d}_t{terms}.txt").write_text(render_polynomial(f) + "\n")
    print(f"wrote {len(list(OUT.iterdir()))} files to {OUT}")
