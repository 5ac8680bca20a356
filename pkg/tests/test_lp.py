import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subtropical.lp import (
    ConstraintSystem,
    ExponentBoundExceeded,
    build_system,
    integerize,
    lpsolve,
    round_normal,
    simplex_feasible,
)
from subtropical.poly import MultiPoly, support_partition

from oracles import in_planar_hull, separation_feasible_fm

F = MultiPoly(("x1", "x2"), {(5, 0): -2, (2, 1): 1, (2, 0): -3, (0, 3): -1, (0, 2): 2})
FIRST = [[-2, -1, 1], [0, 2, -1], [2, 0, -1], [5, 0, -1], [0, 3, -1]]
SECOND = [[0, -2, 1], [2, 0, -1], [5, 0, -1], [0, 3, -1]]


def test_build_system_worked_example():
    part = support_partition(F)
    sys1 = build_system(part, (2, 1), [(0, 2), (2, 0), (5, 0), (0, 3)])
    assert sys1.rows == FIRST
    sys2 = build_system(part, (0, 2), [(2, 0), (5, 0), (0, 3)])
    assert sys2.rows == SECOND
    assert sys2.candidate == (0, 2)


def test_build_system_constant_row():
    f = MultiPoly(("x",), {(1,): 1, (0,): -1})
    assert build_system(support_partition(f), (1,), []).rows == [[-1, 1], [0, -1]]


def test_build_system_rejects_zero_candidate():
    with pytest.raises(ValueError):
        build_system(support_partition(F), (0, 0), [])


def test_worked_example_verdicts():
    assert not simplex_feasible(ConstraintSystem.from_rows(FIRST)).feasible
    out = simplex_feasible(ConstraintSystem.from_rows(SECOND))
    assert out.feasible
    assert ConstraintSystem.from_rows(SECOND).satisfied_by(out.point)


def test_sign_of_printed_solution():
    # the hyperplane -3 x1 - 2 x2 + 5 = 0 corresponds to c = -5
    sys2 = ConstraintSystem.from_rows(SECOND)
    assert sys2.satisfied_by((-3, -2, -5))
    assert not sys2.satisfied_by((-3, -2, 5))


def test_toy_infeasible():
    assert not simplex_feasible(ConstraintSystem.from_rows([[1], [-1]])).feasible


def test_empty_system():
    out = simplex_feasible(ConstraintSystem.from_rows([], num_vars=3))
    assert out.feasible and out.point == (0, 0, 0)


def test_rational_rows():
    sys = ConstraintSystem.from_rows([[Fraction(1, 2), Fraction(-1, 3)], [Fraction(-1, 4), 1]])
    out = simplex_feasible(sys)
    assert out.feasible == separation_feasible_fm(sys.rows)


def test_integerize_examples():
    sys2 = ConstraintSystem.from_rows(SECOND)
    assert integerize((-3, -2, -5), sys2).n == (-3, -2)
    # n = (1/2, 1/3), c = 0 satisfies these rows; m = 6 gives ((3, 2), 5)
    sys = ConstraintSystem.from_rows([[-2, -3, 1], [-2, 0, 0]])
    assert sys.satisfied_by((Fraction(1, 2), Fraction(1, 3), 0))
    sol = integerize((Fraction(1, 2), Fraction(1, 3), 0), sys)
    assert sol.n == (3, 2) and sol.c == 5
    one = ConstraintSystem.from_rows([[-1, 1]])
    assert integerize((5, -2), one).n == (5,)


def test_integerize_bound():
    sys = ConstraintSystem.from_rows([[-1, 0]])
    with pytest.raises(ExponentBoundExceeded):
        integerize((Fraction(2**21), 0), sys, max_exponent=2**20)
    assert integerize((Fraction(2**21), 0), sys, max_exponent=None).n == (2**21,)


def test_lpsolve_examples():
    assert lpsolve(ConstraintSystem.from_rows(FIRST)) is None
    sys2 = ConstraintSystem.from_rows(SECOND)
    sol = lpsolve(sys2)
    assert sys2.satisfied_by(list(sol.n) + [sol.c])
    single = ConstraintSystem.from_rows([[-1, 1]])
    sol = lpsolve(single)
    assert sol.n[0] >= sol.c + 1


def test_lpsolve_bound_propagates():
    # the only separating normals have n >= 3
    sys = ConstraintSystem(np.array([[-1, 0]]), np.array([3]))
    assert lpsolve(sys).n[0] >= 3
    with pytest.raises(ExponentBoundExceeded):
        lpsolve(sys, max_exponent=2)


def test_round_normal_prefers_small():
    sys = ConstraintSystem.from_rows(SECOND)
    sol = round_normal((Fraction(-30, 7), Fraction(-20, 7), Fraction(-50, 7)), sys)
    assert sol is not None and max(map(abs, sol.n)) <= 5
    assert sys.satisfied_by(list(sol.n) + [sol.c])


def _random_rows(rng, d):
    k = rng.randint(1, 12)
    return [[rng.randint(-4, 4) for _ in range(d + 1)] for _ in range(k)]


def _support_rows(rng, d):
    pts = list({tuple(rng.randint(0, 5) for _ in range(d)) for _ in range(rng.randint(2, 11))})
    pts = [p for p in pts if any(p)]
    if not pts:
        pts = [(1,) * d]
    cand = rng.choice(pts)
    rows = [[-e for e in cand] + [1]] + [list(p) + [-1] for p in pts if p != cand]
    if rng.random() < 0.5:
        rows.append([0] * d + [-1])
    return rows


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_simplex_matches_fourier_motzkin(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    rows = _support_rows(rng, d) if rng.random() < 0.5 else _random_rows(rng, d)
    sys = ConstraintSystem.from_rows(rows)
    out = simplex_feasible(sys)
    assert out.feasible == separation_feasible_fm(rows)
    if out.feasible:
        assert sys.satisfied_by(out.point)
        sol = lpsolve(sys, max_exponent=None)
        assert sys.satisfied_by(list(sol.n) + [sol.c])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_planar_vertex_oracle(seed):
    rng = random.Random(seed)
    pts = list({(rng.randint(0, 6), rng.randint(0, 6)) for _ in range(rng.randint(2, 10))})
    pts = [p for p in pts if p != (0, 0)]
    if not pts:
        return
    const = rng.random() < 0.5
    terms = {p: rng.choice([-1, 1]) for p in pts}
    if const:
        terms[(0, 0)] = 1
    part = support_partition(MultiPoly(("x", "y"), terms))
    for cand in pts:
        others = [p for p in pts if p != cand]
        sys = build_system(part, cand, others)
        hull = others + ([(0, 0)] if const else [])
        assert simplex_feasible(sys).feasible == (not in_planar_hull(cand, hull))


def test_worked_example_hull():
    pts = [(0, 2), (0, 3), (2, 0), (5, 0)]
    assert in_planar_hull((2, 1), pts)
    for p in pts:
        assert not in_planar_hull(p, [q for q in pts if q != p] + [(2, 1)])


def test_degenerate_cycling_prone_system():
    # many parallel and repeated rows create degenerate pivots
    rows = [[1, 1, -1]] * 6 + [[2, 2, -1]] * 6 + [[-1, -1, 1]] + [[0, 0, -1]]
    sys = ConstraintSystem.from_rows(rows)
    assert simplex_feasible(sys).feasible == separation_feasible_fm(rows)


def test_pivot_statistics_recorded():
    stats = {}
    simplex_feasible(ConstraintSystem.from_rows(SECOND), stats=stats)
    assert stats["pivots"] > 0
