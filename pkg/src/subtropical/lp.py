"""Exact rational feasibility for separation systems ``R v <= -1``.

The solver never forms a tableau over the (possibly huge) row set.  It runs
a two-phase revised simplex on the dual of a small-norm version of the
system, which has ``num_vars + 1`` equality constraints and one column per
row.  Pricing scans all columns with numpy in exact integer arithmetic.
Rational solutions are then lifted to integer normals, preferring a short
rounded vector over the plain common-denominator lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .poly import Exponent, SupportPartition

DEFAULT_MAX_EXPONENT = 2**20

_INT64_SAFE = 2**62


class ExponentBoundExceeded(Exception):
    """Raised when an integerized exponent vector exceeds the configured bound."""

    def __init__(self, n, bound):
        super().__init__(f"exponent vector exceeds bound {bound}: max |n_i| = {max(abs(x) for x in n)}")
        self.n = n
        self.bound = bound


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Rows ``r`` with ``r . v <= -1``.

    Internally each row is stored scaled to integers as ``matrix[j] . v <= -bounds[j]``
    with ``bounds[j] > 0``.
    """

    matrix: np.ndarray
    bounds: np.ndarray
    candidate: Optional[Exponent] = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], num_vars: Optional[int] = None, candidate=None):
        rows = [list(r) for r in rows]
        if num_vars is None:
            if not rows:
                raise ValueError("num_vars is required for an empty system")
            num_vars = len(rows[0])
        scaled, bounds = [], []
        for r in rows:
            if len(r) != num_vars:
                raise ValueError("ragged constraint rows")
            den = math.lcm(*(Fraction(x).denominator for x in r)) if r else 1
            scaled.append([int(Fraction(x) * den) for x in r])
            bounds.append(den)
        matrix = _as_int_array(scaled, (len(rows), num_vars))
        return cls(matrix, np.array(bounds, dtype=object if max(bounds, default=1) >= _INT64_SAFE else np.int64), candidate)

    @property
    def num_vars(self) -> int:
        return self.matrix.shape[1]

    def __len__(self):
        return self.matrix.shape[0]

    @property
    def rows(self) -> list[list[Fraction]]:
        out = []
        for r, b in zip(self.matrix.tolist(), self.bounds.tolist()):
            out.append([Fraction(x, b) if b != 1 else x for x in r])
        return out

    def satisfied_by(self, v: Sequence) -> bool:
        """Exact check of every row at the rational point ``v``."""
        if len(self) == 0:
            return True
        fr = [Fraction(x) for x in v]
        den = math.lcm(*(x.denominator for x in fr))
        V = np.array([int(x * den) for x in fr], dtype=object)
        lhs = self.matrix.astype(object) @ V
        return bool(np.all(lhs <= -den * self.bounds.astype(object)))


@dataclass(frozen=True)
class LpOutcome:
    feasible: bool
    point: Optional[tuple[Fraction, ...]] = None


@dataclass(frozen=True)
class IntegerSolution:
    n: tuple[int, ...]
    c: Fraction


def _as_int_array(rows, shape) -> np.ndarray:
    arr = np.array(rows, dtype=object).reshape(shape)
    if arr.size and np.max(np.abs(arr)) >= _INT64_SAFE:
        return arr
    return arr.astype(np.int64)


def build_system(partition: SupportPartition, candidate: Exponent, others) -> ConstraintSystem:
    """Rows ``(-candidate, 1)``, ``(p, -1)`` for each other point, and ``(0, -1)`` for a constant term."""
    d = partition.dimension
    cand = tuple(candidate)
    if len(cand) != d:
        raise ValueError("candidate dimension mismatch")
    if not any(cand):
        raise ValueError("candidate must not be the zero exponent vector")
    O = np.asarray(others, dtype=np.int64).reshape(-1, d)
    k = O.shape[0] + 1 + (1 if partition.const_coeff else 0)
    M = np.empty((k, d + 1), dtype=np.int64)
    M[0, :d] = [-e for e in cand]
    M[0, d] = 1
    M[1:1 + O.shape[0], :d] = O
    M[1:1 + O.shape[0], d] = -1
    if partition.const_coeff:
        M[-1, :d] = 0
        M[-1, d] = -1
    return ConstraintSystem(M, np.ones(k, dtype=np.int64), cand)


# ---------------------------------------------------------------------------
# simplex


def _lcm_den(vec) -> int:
    return math.lcm(*(x.denominator for x in vec)) if vec else 1


def _scaled(vec: list[Fraction]) -> tuple[list[int], int]:
    L = _lcm_den(vec)
    return [int(v * L) for v in vec], L


class _Simplex:
    """Revised simplex for ``min cost.mu  s.t.  A mu = rhs, mu >= 0`` with few rows.

    ``cols`` holds one column of ``A`` per row of the array (integers), so the
    number of columns may be huge while ``Binv`` stays ``m x m``.  Artificial
    unit columns occupy basis indices ``0..m-1``; structural column ``j`` has
    index ``m + j``.  Pivoting is Dantzig's rule, switching to Bland's rule
    after a run of degenerate pivots.
    """

    def __init__(self, cols: np.ndarray, rhs: list[int]):
        self.cols = cols
        self.m = cols.shape[1]
        small = cols.size == 0 or np.max(np.abs(cols)) < 2**31
        self.cols_fast = cols.astype(np.int64) if small else None
        self.col_norm = int(np.max(np.sum(np.abs(cols), axis=1))) if cols.size else 0
        m = self.m
        self.rhs = [Fraction(b) for b in rhs]
        self.basis = list(range(m))
        self.Binv = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
        self.pivots = 0

    def _xb(self) -> list[Fraction]:
        return [sum((row[t] * self.rhs[t] for t in range(self.m) if self.rhs[t]), Fraction(0)) for row in self.Binv]

    def _duals(self, cb: list[Fraction]) -> list[Fraction]:
        m = self.m
        return [sum((cb[i] * self.Binv[i][j] for i in range(m) if cb[i]), Fraction(0)) for j in range(m)]

    def _products(self, pi: list[Fraction]):
        # returns (cols . pi) * L and L
        Y, L = _scaled(pi)
        if self.cols_fast is not None and max((abs(v) for v in Y), default=0) * self.col_norm < _INT64_SAFE:
            return self.cols_fast @ np.array(Y, dtype=np.int64), L
        return self.cols @ np.array(Y, dtype=object), L

    def run(self, cost_of, costs_scaled) -> str:
        """Optimize; ``cost_of(b)`` is the cost of basis index ``b``.

        ``costs_scaled`` is ``None`` (all structural costs zero) or an integer
        array of structural costs.  Returns ``"optimal"`` or ``"unbounded"``.
        """
        m = self.m
        degenerate_run = 0
        bland = False
        while True:
            cb = [cost_of(b) for b in self.basis]
            pi = self._duals(cb)
            prod, L = self._products(pi)
            # reduced cost * L = cost*L - cols.pi*L ; entering when negative
            if costs_scaled is None:
                red = -prod
            elif isinstance(prod, np.ndarray) and prod.dtype != object and \
                    int(np.max(np.abs(costs_scaled), initial=0)) * L < _INT64_SAFE:
                red = costs_scaled * L - prod
            else:
                red = costs_scaled.astype(object) * L - prod
            neg = np.flatnonzero(red < 0)
            if neg.size == 0:
                return "optimal"
            if bland:
                j = int(neg[0])
            else:
                vals = red[neg]
                j = int(neg[int(np.argmin(vals.astype(float) if vals.dtype == object else vals))])
            a = [int(x) for x in self.cols[j]]
            alpha = [sum((row[t] * a[t] for t in range(m) if a[t]), Fraction(0)) for row in self.Binv]
            xb = self._xb()
            best = None
            for i in range(m):
                if alpha[i] > 0:
                    key = (xb[i] / alpha[i], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            (ratio, _), r = best
            self.pivots += 1
            if ratio == 0:
                degenerate_run += 1
                if degenerate_run > 2 * m:
                    bland = True
            else:
                degenerate_run = 0
                bland = False
            self._pivot(r, alpha, m + j)

    def _pivot(self, r: int, alpha: list[Fraction], entering: int):
        piv = alpha[r]
        row_r = [x / piv for x in self.Binv[r]]
        for i in range(self.m):
            ai = alpha[i]
            if i != r and ai:
                Bi = self.Binv[i]
                self.Binv[i] = [Bi[t] - ai * row_r[t] for t in range(self.m)]
        self.Binv[r] = row_r
        self.basis[r] = entering

    def drive_out_artificials(self):
        """Replace zero-level artificial basics by structural columns where possible."""
        m = self.m
        for r in range(m):
            if self.basis[r] >= m:
                continue
            # row r of Binv times the columns; any nonzero entry can pivot in
            prod = self.cols @ np.array(self.Binv[r], dtype=object)
            nz = np.flatnonzero(prod != 0)
            in_basis = set(self.basis)
            nz = [int(j) for j in nz if m + int(j) not in in_basis]
            if not nz:
                continue  # redundant equation; the artificial stays at zero forever
            j = nz[0]
            a = [int(x) for x in self.cols[j]]
            alpha = [sum((row[t] * a[t] for t in range(m) if a[t]), Fraction(0)) for row in self.Binv]
            self.pivots += 1
            self._pivot(r, alpha, m + j)


def simplex_feasible(sys: ConstraintSystem, *, stats: Optional[dict] = None) -> LpOutcome:
    """Decide ``sys`` exactly; on success return a rational point satisfying every row.

    Among all solutions the returned one minimizes ``max |v_i|`` over the
    normal part (all coordinates but the last), which keeps exponents small.
    This is the primal of a problem whose dual has one equation per variable:

        max b.mu  s.t.  M^T mu + (bound columns) = 0,  sum(bound weights) = 1,  mu >= 0

    The dual is always feasible; it is unbounded exactly when ``sys`` is
    infeasible (its recession directions are Farkas certificates).
    """
    N, k = sys.matrix.shape
    if N == 0:
        return LpOutcome(True, tuple(Fraction(0) for _ in range(k)))
    bounded = list(range(k - 1)) if k > 1 else [0]
    m = k + 1
    M = sys.matrix.astype(object)
    sep = np.concatenate([M, np.zeros((N, 1), dtype=object)], axis=1)
    box = np.zeros((2 * len(bounded), m), dtype=object)
    for t, i in enumerate(bounded):
        box[2 * t, i], box[2 * t, k] = 1, 1
        box[2 * t + 1, i], box[2 * t + 1, k] = -1, 1
    cols = np.concatenate([sep, box], axis=0)
    rhs = [0] * k + [1]
    costs = np.concatenate([-sys.bounds.astype(object), np.zeros(len(box), dtype=object)])
    if np.max(np.abs(costs)) < _INT64_SAFE:
        costs = costs.astype(np.int64)

    lp = _Simplex(cols, rhs)
    # phase 1: artificials cost 1
    lp.run(lambda b: Fraction(1) if b < m else Fraction(0), None)
    xb = lp._xb()
    if any(b < m and x != 0 for b, x in zip(lp.basis, xb)):
        raise AssertionError("bounded dual must be feasible")
    lp.drive_out_artificials()
    # phase 2: artificials never re-enter (they are not columns of A)
    status = lp.run(lambda b: Fraction(0) if b < m else Fraction(int(costs[b - m])), costs)
    if stats is not None:
        stats["pivots"] = stats.get("pivots", 0) + lp.pivots
    if status == "unbounded":
        return LpOutcome(False)
    cb = [Fraction(0) if b < m else Fraction(int(costs[b - m])) for b in lp.basis]
    pi = lp._duals(cb)
    # x = pi solves  A x <= beta  for the min-norm primal
    v = tuple(pi[:k])
    if not sys.satisfied_by(v):
        raise AssertionError("simplex returned a point violating the system")
    return LpOutcome(True, v)


def integerize(v: Sequence, sys: ConstraintSystem, max_exponent: Optional[int] = DEFAULT_MAX_EXPONENT) -> IntegerSolution:
    """Scale the normal part of ``v`` to integers: ``(m*n, m*c + m - 1)`` with ``m`` the principal denominator."""
    fr = [Fraction(x) for x in v]
    n, c = fr[:-1], fr[-1]
    mult = _lcm_den(n)
    n_int = tuple(int(x * mult) for x in n)
    c_new = mult * c + mult - 1
    if max_exponent is not None and any(abs(x) > max_exponent for x in n_int):
        raise ExponentBoundExceeded(n_int, max_exponent)
    if not sys.satisfied_by(list(n_int) + [c_new]):
        raise AssertionError("integerization broke feasibility")
    return IntegerSolution(n_int, c_new)


def _fit_last(sys: ConstraintSystem, n: Sequence[int]) -> Optional[Fraction]:
    """A last coordinate ``c`` making ``(n, c)`` feasible, preferring integers; ``None`` if there is none."""
    M = sys.matrix
    head = M[:, :-1]
    if head.dtype == object or max((abs(x) for x in n), default=0) * int(np.max(np.abs(head), initial=0)) * len(n) >= _INT64_SAFE:
        rest = head.astype(object) @ np.array(list(n), dtype=object)
    else:
        rest = head @ np.array(list(n), dtype=np.int64)
    # rows: a*c <= -(bound + rest)
    a = M[:, -1]
    rhs = -(sys.bounds.astype(object) + rest.astype(object))
    if np.any(rhs[a == 0] < 0):
        return None
    lo = max((Fraction(int(r), int(x)) for r, x in zip(rhs[a < 0], a[a < 0])), default=None)
    hi = min((Fraction(int(r), int(x)) for r, x in zip(rhs[a > 0], a[a > 0])), default=None)
    if lo is not None and hi is not None and lo > hi:
        return None
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(math.floor(hi))
    if hi is None or math.ceil(lo) <= hi:
        return Fraction(math.ceil(lo))
    return (lo + hi) / 2


def round_normal(v: Sequence, sys: ConstraintSystem, limit: int = 64) -> Optional[IntegerSolution]:
    """Smallest-scale rounding ``round(s * n)`` of the normal part that stays feasible.

    Tries ``s = 1..limit``; returns ``None`` when no such rounding works.
    """
    fr = [Fraction(x) for x in v]
    n = fr[:-1]
    if not n:
        return None
    for scale in range(1, limit + 1):
        cand = tuple(round(x * scale) for x in n)
        c = _fit_last(sys, cand)
        if c is not None:
            sol = IntegerSolution(cand, c)
            if sys.satisfied_by(list(cand) + [c]):
                return sol
    return None


def lpsolve(sys: ConstraintSystem, max_exponent: Optional[int] = DEFAULT_MAX_EXPONENT,
            *, stats: Optional[dict] = None) -> Optional[IntegerSolution]:
    """Integer-normal separating solution, or ``None`` when infeasible.

    The rational optimum is lifted by the smaller of a scaled rounding and
    :func:`integerize`.  Raises :class:`ExponentBoundExceeded` when the
    solution is too large.
    """
    out = simplex_feasible(sys, stats=stats)
    if not out.feasible:
        return None
    fr = [Fraction(x) for x in out.point]
    exact_n = [x * _lcm_den(fr[:-1]) for x in fr[:-1]]
    rounded = round_normal(fr, sys)
    if rounded is not None and max(map(abs, rounded.n), default=0) <= max(map(abs, exact_n), default=0):
        if max_exponent is not None and any(abs(x) > max_exponent for x in rounded.n):
            raise ExponentBoundExceeded(rounded.n, max_exponent)
        return rounded
    return integerize(out.point, sys, max_exponent)
