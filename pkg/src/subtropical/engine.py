"""The subtropical search: positive points via Newton-polytope separation, then zeros.

``find_zero`` is the entry point.  It normalizes the input so that
``f(1, ..., 1) < 0``, looks for a point where ``f > 0`` by separating a
suitable support point from the rest with an exact LP, and finally intersects
the segment between the two points with the variety.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import lp
from .lp import DEFAULT_MAX_EXPONENT, ExponentBoundExceeded
from .poly import (
    INF,
    DyadicPower,
    EvalPoint,
    Exponent,
    LaurentPoly,
    MultiPoly,
    SupportPartition,
    UniPoly,
    evaluate,
    integer_line_substitute,
    interval_evaluate,
    laurent_substitute,
    support_partition,
)
from .realroot import RealAlgebraicNumber, affine_image, isolate_in_unit_interval, refine

POSITIVE = "positive"
GENERAL = "general"

ZERO = "zero"
ALL_ONES = "all_ones"
DEFINITE = "definite"
POSITIVE_VALUE = "positive_value"
FAILED = "failed"

# far beyond any bound the dominance argument can produce
_MAX_DOUBLINGS = 100_000


class PreconditionViolated(ValueError):
    pass


@dataclass
class SearchStats:
    candidates_tried: int = 0
    lp_solves: int = 0
    doubling_steps: int = 0
    bound_skips: int = 0
    pivots: int = 0
    time_ms: int = 0


@dataclass(frozen=True)
class Witness:
    """A point where the normalized polynomial is positive.

    ``point``, ``t`` and ``value`` are ``None`` for existence-only searches,
    which stop after the LP succeeds.  ``value`` is also ``None`` when the
    exact number is too large to form; its sign is still certified.
    """

    point: Optional[EvalPoint]
    candidate: Exponent
    n: tuple[int, ...]
    c: Fraction
    t: Optional[int]
    mu: Union[int, float] = INF
    negated: bool = False
    value: Optional[Fraction] = None


@dataclass(frozen=True)
class ZeroCertificate:
    coords: tuple[RealAlgebraicNumber, ...]
    p: EvalPoint
    q: tuple[Fraction, ...]
    gbar: UniPoly
    r: RealAlgebraicNumber
    content: int


@dataclass(frozen=True)
class Outcome:
    status: str
    certificate: Optional[ZeroCertificate] = None
    witness: Optional[Witness] = None
    sign: int = 0
    negated: bool = False
    stats: SearchStats = field(default_factory=SearchStats)


# ---------------------------------------------------------------------------


def detect_definite(partition: SupportPartition) -> bool:
    """True when the (normalized, negative at the all-ones point) polynomial is negative on the open orthant."""
    return not partition.pos and partition.const_coeff <= 0


def doubling_bound(f: MultiPoly, candidate: Exponent) -> int:
    """Largest ``t`` the doubling loop may reach for an integral separating normal."""
    lead = abs(f.coeff(candidate))
    rest = max((abs(c) for p, c in f.terms.items() if p != tuple(candidate)), default=0)
    s = len(f.terms)
    return 2 * max(2, math.ceil(Fraction(rest, lead) * (s - 1)))


# exact witness values are only formed below this many bit operations
_VALUE_BUDGET = 1 << 28


def _value_cost(f1: LaurentPoly, k: int) -> int:
    if not f1.terms:
        return 0
    return len(f1.terms) * k * (max(f1.terms) - min(f1.terms))


def dominant_scale(f: MultiPoly, n: Sequence[int], mu: Union[int, float] = INF,
                   laurent: Optional[LaurentPoly] = None) -> tuple[EvalPoint, int, int, Optional[Fraction]]:
    """Double ``t`` from 2 until ``f`` is positive on the (sign-adjusted) moment curve.

    Returns ``(point, t, doublings, value)``.  The substitution into ``f`` is
    done once, as a Laurent polynomial in ``t``; the loop only needs signs.
    ``value`` is the exact value at the point, or ``None`` when that number
    would be too large to be worth forming.
    """
    f1 = laurent if laurent is not None else laurent_substitute(f, n, mu)
    k = 1
    steps = 0
    while f1.sign_at_power_of_two(k) <= 0:
        k += 1
        steps += 1
        if steps > _MAX_DOUBLINGS:
            raise RuntimeError("doubling loop did not terminate; is (n, c) a separating solution?")
    value = f1.value_at_power_of_two(k) if _value_cost(f1, k) <= _VALUE_BUDGET else None
    coords = tuple(DyadicPower(-1 if i + 1 == mu else 1, k * ni) for i, ni in enumerate(n))
    return EvalPoint(coords), 1 << k, steps, value


def _search(f: MultiPoly, general: bool, max_exponent: Optional[int], scale: bool,
            stats: Optional[SearchStats], negated: bool = False) -> Optional[Witness]:
    if f.is_zero():
        raise ValueError("the zero polynomial has no positive point")
    stats = stats if stats is not None else SearchStats()
    part = support_partition(f)
    order = sorted(part.pos + part.neg, key=lambda p: (-sum(p), tuple(-e for e in p)))
    index = {p: i for i, p in enumerate(order)}
    S = np.array(order, dtype=np.int64).reshape(len(order), f.dimension)
    active = np.ones(len(order), dtype=bool)

    candidates: list[tuple[Exponent, Union[int, float]]] = [(p, INF) for p in part.pos]
    if general:
        candidates += list(part.weak_neg)
    lp_stats: dict = {}
    for cand, mu in candidates:
        stats.candidates_tried += 1
        i = index[cand]
        mask = active.copy()
        mask[i] = False
        system = lp.build_system(part, cand, S[mask])
        stats.lp_solves += 1
        try:
            sol = lp.lpsolve(system, max_exponent, stats=lp_stats)
        except ExponentBoundExceeded:
            # the row stays a constraint: the point may still be a vertex
            stats.bound_skips += 1
            continue
        finally:
            stats.pivots = lp_stats.get("pivots", 0)
        if sol is None:
            # not a vertex of the current hull, so dropping it leaves the polytope unchanged
            active[i] = False
            continue
        if not scale:
            return Witness(None, cand, sol.n, sol.c, None, mu, negated)
        point, t, steps, value = dominant_scale(f, sol.n, mu)
        stats.doubling_steps += steps
        if value is not None and (value <= 0 or evaluate(f, point) != value):
            raise AssertionError("witness point does not have a positive value")
        return Witness(point, cand, sol.n, sol.c, t, mu, negated, value)
    return None


def find_positive(f: MultiPoly, *, max_exponent: Optional[int] = DEFAULT_MAX_EXPONENT,
                  scale: bool = True, stats: Optional[SearchStats] = None) -> Optional[Witness]:
    """Point with strictly positive coordinates where ``f > 0``, or ``None``.

    Candidates are the positive-coefficient support points in canonical order.
    """
    return _search(f, False, max_exponent, scale, stats)


def find_positive_general(f: MultiPoly, *, max_exponent: Optional[int] = DEFAULT_MAX_EXPONENT,
                          scale: bool = True, stats: Optional[SearchStats] = None) -> Optional[Witness]:
    """Like :func:`find_positive`, then also tries weakly negative support points.

    A weakly negative candidate is made dominant-positive by negating the
    coordinate at its minimal odd index.
    """
    return _search(f, True, max_exponent, scale, stats)


def construct_zero(f: MultiPoly, p: Union[EvalPoint, Sequence], q: Sequence) -> ZeroCertificate:
    """Zero of ``f`` on the segment from ``p`` to ``q`` as real algebraic coordinates."""
    if not isinstance(p, EvalPoint):
        p = EvalPoint(tuple(p))
    q = tuple(Fraction(v) for v in q)
    fp, fq = evaluate(f, p), evaluate(f, q)
    if fp * fq >= 0:
        raise PreconditionViolated(f"need opposite signs at the segment ends, got {fp} and {fq}")
    pr = p.to_fractions()
    G, denom = integer_line_substitute(f, pr, q)
    g_common = math.gcd(denom, *G)
    D = denom // g_common
    gbar = UniPoly(c // g_common for c in G)
    roots = isolate_in_unit_interval(gbar)
    if not roots:
        raise AssertionError("no root in ]0,1[ despite a sign change")
    r = roots[0]
    coords = tuple(affine_image(r, a, b - a) for a, b in zip(pr, q))
    return ZeroCertificate(coords, p, q, gbar, r, D)


def trivial_certificate(d: int) -> ZeroCertificate:
    one = RealAlgebraicNumber.rational(1)
    ones = tuple(Fraction(1) for _ in range(d))
    return ZeroCertificate(tuple(one for _ in range(d)), EvalPoint(ones), ones, UniPoly(), RealAlgebraicNumber.rational(0), 1)


def find_zero(f: MultiPoly, mode: str = POSITIVE, existence_only: bool = False, *,
              max_exponent: Optional[int] = DEFAULT_MAX_EXPONENT) -> Outcome:
    if mode not in (POSITIVE, GENERAL):
        raise ValueError(f"unknown mode {mode!r}")
    stats = SearchStats()
    start = time.perf_counter()

    def done(status, **kw):
        stats.time_ms = int((time.perf_counter() - start) * 1000)
        return Outcome(status, stats=stats, **kw)

    d = f.dimension
    if f.is_zero():
        return done(ZERO, certificate=trivial_certificate(d))
    y = f.sum_of_coefficients()
    if y == 0:
        return done(ALL_ONES)
    negated = y > 0
    fn = -f if negated else f
    part = support_partition(fn)
    if detect_definite(part) and (mode == POSITIVE or not part.weak_neg):
        return done(DEFINITE, sign=1 if negated else -1, negated=negated)
    general = mode == GENERAL
    witness = _search(fn, general, max_exponent, not existence_only, stats, negated)
    if witness is None:
        return done(FAILED, negated=negated)
    if existence_only:
        return done(POSITIVE_VALUE, witness=witness, negated=negated)
    ones = tuple(Fraction(1) for _ in range(d))
    cert = construct_zero(fn, witness.point, ones)
    return done(ZERO, certificate=cert, witness=witness, negated=negated)


def certificate_encloses_zero(f: MultiPoly, cert: ZeroCertificate, width: Fraction) -> bool:
    """Refine every coordinate to ``width`` and check ``0`` lies in the interval value of ``f`` over the box."""
    box = [refine(z, width).bounds() for z in cert.coords]
    lo, hi = interval_evaluate(f, box)
    return lo <= 0 <= hi
