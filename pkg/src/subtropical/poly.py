"""Sparse multivariate integer polynomials and the substitutions used by the search.

A :class:`MultiPoly` maps exponent tuples to nonzero Python ints.  All
operations are exact; floating point never enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

Exponent = tuple[int, ...]
Rational = Union[int, Fraction]

INF = math.inf


def canonical_key(p: Exponent) -> tuple:
    """Sort key: descending total degree, then descending lexicographic."""
    return (-sum(p), tuple(-e for e in p))


@dataclass(frozen=True)
class DyadicPower:
    """The value ``sign * 2**exp``."""

    sign: int
    exp: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.sign << self.exp)
        return Fraction(self.sign, 1 << -self.exp)

    def __str__(self):
        return str(self.to_fraction()) if abs(self.exp) <= 64 else f"{'-' if self.sign < 0 else ''}2^{self.exp}"


Coordinate = Union[int, Fraction, DyadicPower]


@dataclass(frozen=True)
class EvalPoint:
    coords: tuple[Coordinate, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    def __len__(self):
        return len(self.coords)

    @property
    def is_dyadic(self) -> bool:
        return all(isinstance(c, DyadicPower) for c in self.coords)

    def to_fractions(self) -> tuple[Fraction, ...]:
        return tuple(c.to_fraction() if isinstance(c, DyadicPower) else Fraction(c) for c in self.coords)


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """Sparse polynomial ``sum(coeff * x**p)`` over the integers.

    ``terms`` must not be mutated after construction.
    """

    variables: tuple[str, ...]
    terms: Mapping[Exponent, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        d = len(self.variables)
        if len(set(self.variables)) != d:
            raise ValueError("variable names must be distinct")
        clean = {}
        for p, c in self.terms.items():
            p = tuple(int(e) for e in p)
            if len(p) != d or any(e < 0 for e in p):
                raise ValueError(f"bad exponent vector {p} for dimension {d}")
            if c:
                clean[p] = int(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: Iterable[tuple[Exponent, int]]) -> "MultiPoly":
        acc: dict[Exponent, int] = {}
        for p, c in terms:
            p = tuple(p)
            acc[p] = acc.get(p, 0) + c
        return cls(tuple(variables), acc)

    @classmethod
    def constant(cls, value: int, variables: Sequence[str] = ()) -> "MultiPoly":
        return cls(tuple(variables), {(0,) * len(variables): value})

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {p: -c for p, c in self.terms.items()})

    def __repr__(self):
        return f"MultiPoly({self.variables!r}, {len(self.terms)} terms)"

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, p: Exponent) -> int:
        return self.terms.get(tuple(p), 0)

    @cached_property
    def total_degree(self) -> int:
        return max((sum(p) for p in self.terms), default=0)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Largest exponent of each variable."""
        if not self.terms:
            return (0,) * self.dimension
        return tuple(int(x) for x in self.exponent_matrix.max(axis=0)) if self.dimension else ()

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @cached_property
    def exponent_matrix(self) -> np.ndarray:
        """Exponents as an ``(len(self), d)`` int64 array in ``terms`` iteration order."""
        if not self.terms:
            return np.zeros((0, self.dimension), dtype=np.int64)
        return np.array(list(self.terms), dtype=np.int64).reshape(len(self.terms), self.dimension)

    def sum_of_coefficients(self) -> int:
        return sum(self.terms.values())

    def __call__(self, *coords):
        return evaluate(self, EvalPoint(coords))


@dataclass(frozen=True)
class SupportPartition:
    pos: tuple[Exponent, ...]
    weak_neg: tuple[tuple[Exponent, int], ...]
    strong_neg: tuple[Exponent, ...]
    const_coeff: int
    dimension: int

    @property
    def neg(self) -> tuple[Exponent, ...]:
        return tuple(p for p, _ in self.weak_neg) + self.strong_neg


class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first.

    Coefficients are ints (the integer variant) or Fractions.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    @property
    def leading(self) -> Rational:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x: Rational) -> Rational:
        acc: Rational = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("y" if k == 1 else f"y^{k}")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


@dataclass(frozen=True)
class LaurentPoly:
    """Univariate polynomial with integer, possibly negative, exponents."""

    terms: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "terms", {int(e): int(c) for e, c in self.terms.items() if c})

    def __call__(self, t: Rational) -> Fraction:
        t = Fraction(t)
        return sum((c * t**e for e, c in self.terms.items()), Fraction(0))

    def value_at_power_of_two(self, k: int) -> Fraction:
        """Exact value at ``t = 2**k`` via shifts."""
        exps = list(self.terms)
        return _dyadic_sum(list(self.terms.values()), [k * e for e in exps])

    def sign_at_power_of_two(self, k: int) -> int:
        """Sign of the value at ``t = 2**k`` (``k >= 1``) without forming the full number.

        Terms are scanned from the highest exponent down.  At level ``e`` the
        unseen terms contribute less than the sum of their absolute
        coefficients, since every gap between distinct exponents is at least
        one and ``2**k >= 2``; once the running sum exceeds that, its sign wins.
        """
        if k < 1:
            v = self.value_at_power_of_two(k)
            return (v > 0) - (v < 0)
        items = sorted(self.terms.items(), reverse=True)
        remaining = sum(abs(c) for _, c in items)
        acc, level = 0, None
        for e, c in items:
            if acc:
                if abs(acc) >= remaining:
                    break
                shift = k * (level - e)
                if shift > remaining.bit_length() + 1:
                    break
                acc <<= shift
            acc += c
            remaining -= abs(c)
            level = e
        return (acc > 0) - (acc < 0)


# ---------------------------------------------------------------------------
# support analysis


def moc(p: Sequence[int]) -> Union[int, float]:
    """1-based index of the first odd entry of ``p``; ``math.inf`` when all are even."""
    for i, e in enumerate(p, start=1):
        if e & 1:
            return i
    return INF


def support_partition(f: MultiPoly) -> SupportPartition:
    pos, weak, strong = [], [], []
    zero = (0,) * f.dimension
    for p in sorted(f.terms, key=canonical_key):
        if p == zero:
            continue
        if f.terms[p] > 0:
            pos.append(p)
        else:
            m = moc(p)
            if m == INF:
                strong.append(p)
            else:
                weak.append((p, m))
    return SupportPartition(tuple(pos), tuple(weak), tuple(strong), f.terms.get(zero, 0), f.dimension)


# ---------------------------------------------------------------------------
# evaluation


def _dyadic_sum(coeffs: Sequence[int], exps: Sequence[int]) -> Fraction:
    # sum(c * 2**e) exactly
    if not coeffs:
        return Fraction(0)
    lo = min(exps)
    total = 0
    for c, e in zip(coeffs, exps):
        total += c << (e - lo)
    return Fraction(total << lo) if lo >= 0 else Fraction(total, 1 << -lo)


def evaluate(f: MultiPoly, point: Union[EvalPoint, Sequence[Coordinate]]) -> Fraction:
    """Exact value of ``f`` at ``point``."""
    if not isinstance(point, EvalPoint):
        point = EvalPoint(tuple(point))
    if len(point) != f.dimension:
        raise ValueError(f"point has dimension {len(point)}, polynomial has {f.dimension}")
    if not f.terms:
        return Fraction(0)
    if point.is_dyadic and f.dimension:
        P = f.exponent_matrix
        e = np.array([c.exp for c in point.coords], dtype=object)
        neg = np.array([c.sign < 0 for c in point.coords], dtype=np.int64)
        exps = (P.astype(object) @ e).tolist()
        flips = ((P & 1) @ neg) & 1
        coeffs = [-c if fl else c for c, fl in zip(f.terms.values(), flips.tolist())]
        return _dyadic_sum(coeffs, exps)
    xs = point.to_fractions()
    # common denominator per coordinate keeps the inner loop in ints
    nums = [x.numerator for x in xs]
    dens = [x.denominator for x in xs]
    degs = f.degrees
    num_pows = [_powers(n, E) for n, E in zip(nums, degs)]
    den_pows = [_powers(dn, E) for dn, E in zip(dens, degs)]
    total = 0
    for p, c in f.terms.items():
        term = c
        for i, e in enumerate(p):
            term *= num_pows[i][e] * den_pows[i][degs[i] - e]
        total += term
    denom = 1
    for i, E in enumerate(degs):
        denom *= den_pows[i][E]
    return Fraction(total, denom)


def _powers(base: int, top: int) -> list[int]:
    out = [1] * (top + 1)
    for k in range(1, top + 1):
        out[k] = out[k - 1] * base
    return out


# ---------------------------------------------------------------------------
# univariate restrictions


def _line_pieces(p: Sequence[Rational], q: Sequence[Rational]):
    # x_i = (a_i + b_i*y) / den_i with integers
    pieces = []
    for pi, qi in zip(p, q):
        pi, qi = Fraction(pi), Fraction(qi)
        slope = qi - pi
        den = math.lcm(pi.denominator, slope.denominator)
        pieces.append((int(pi * den), int(slope * den), den))
    return pieces


def line_substitute(f: MultiPoly, p: Sequence[Rational], q: Sequence[Rational]) -> UniPoly:
    """``g(y) = f(p + y*(q - p))`` with rational coefficients."""
    if len(p) != f.dimension or len(q) != f.dimension:
        raise ValueError("segment endpoints must match the polynomial dimension")
    if not f.terms:
        return UniPoly()
    G, denom = integer_line_substitute(f, p, q)
    return UniPoly(Fraction(c, denom) for c in G)


def integer_line_substitute(f: MultiPoly, p: Sequence[Rational], q: Sequence[Rational]) -> tuple[list[int], int]:
    """Integer coefficients ``G`` and ``denom > 0`` with ``f(p + y(q-p)) = G(y)/denom``.

    The multivariate-to-univariate composition runs in FLINT.
    """
    import flint

    d = f.dimension
    pieces = _line_pieces(p, q)
    if d == 0:
        return [f.terms.get((), 0)], 1
    degs = f.degrees
    denom = 1
    for (_, _, den), E in zip(pieces, degs):
        denom *= den**E
    if denom == 1:
        scaled = f.terms
    else:
        tables = [_powers(den, E) for (_, _, den), E in zip(pieces, degs)]
        scaled = {}
        for mono, c in f.terms.items():
            for i, e in enumerate(mono):
                if tables[i][-1] != 1:
                    c *= tables[i][degs[i] - e]
            scaled[mono] = c
    ctx = flint.fmpz_mpoly_ctx.get(("x", d))
    uni = flint.fmpz_mpoly_ctx.get(("y", 1))
    y = uni.gen(0)
    F = ctx.from_dict(scaled)
    lines = [uni.from_dict({(0,): a}) + b * y for a, b, _ in pieces]
    G = F.compose(*lines, ctx=uni)
    coeffs = [0] * (G.total_degree() + 1 if not G.is_zero() else 0)
    for (k,), c in G.to_dict().items():
        coeffs[k] = int(c)
    return coeffs, denom


def clear_denominators(g: UniPoly) -> tuple[UniPoly, int]:
    """``(D*g, D)`` where ``D`` is the lcm of the coefficient denominators."""
    D = 1
    for c in g.coeffs:
        if isinstance(c, Fraction):
            D = math.lcm(D, c.denominator)
    return UniPoly(int(c * D) for c in g.coeffs), D


def laurent_substitute(f: MultiPoly, n: Sequence[int], mu: Union[int, float] = INF) -> LaurentPoly:
    """``f(y**n_1, ..., y**n_d)`` with the ``mu``-th coordinate negated when ``mu`` is finite."""
    if len(n) != f.dimension:
        raise ValueError("exponent vector length must equal the polynomial dimension")
    acc: dict[int, int] = {}
    if not f.terms:
        return LaurentPoly({})
    if f.dimension == 0:
        return LaurentPoly({0: f.terms[()]})
    P = f.exponent_matrix
    exps = (P.astype(object) @ np.array([int(v) for v in n], dtype=object)).tolist()
    coeffs = list(f.terms.values())
    if mu != INF:
        odd = (P[:, int(mu) - 1] & 1).tolist()
        coeffs = [-c if o else c for c, o in zip(coeffs, odd)]
    for e, c in zip(exps, coeffs):
        acc[e] = acc.get(e, 0) + c
    return LaurentPoly(acc)


# ---------------------------------------------------------------------------
# coordinate transformations


def orthant_transform(f: MultiPoly, s: Sequence[int]) -> MultiPoly:
    """``g(a) = f(s_1 a_1, ..., s_d a_d)`` for signs ``s_i`` in {-1, +1}."""
    if len(s) != f.dimension or any(v not in (1, -1) for v in s):
        raise ValueError("orthant must be a sign vector of the polynomial's dimension")
    neg = [i for i, v in enumerate(s) if v < 0]
    out = {}
    for p, c in f.terms.items():
        flips = sum(p[i] for i in neg)
        out[p] = -c if flips & 1 else c
    return MultiPoly(f.variables, out)


def _binomial_row(k: int) -> list[int]:
    return [math.comb(k, j) for j in range(k + 1)]


def range_transform(f: MultiPoly, i: int, kind: str, bound: Rational) -> MultiPoly:
    """Shift variable ``i`` (0-based) so positive values cover a half line.

    ``kind="lower"`` substitutes ``x_i -> x_i + bound``; ``kind="upper"``
    substitutes ``x_i -> -x_i - bound``.  When ``bound`` has denominator
    ``den`` the result is multiplied by ``den**deg_i(f)`` to stay integral.
    """
    if kind not in ("lower", "upper"):
        raise ValueError("kind must be 'lower' or 'upper'")
    if not 0 <= i < f.dimension:
        raise IndexError(i)
    b = Fraction(bound)
    num, den = b.numerator, b.denominator
    E = f.degrees[i] if f.terms else 0
    lin_sign = 1 if kind == "lower" else -1
    shift = num if kind == "lower" else -num
    acc: dict[Exponent, int] = {}
    for p, c in f.terms.items():
        e = p[i]
        # (lin_sign*den*x + shift)^e * den^(E-e), then the overall den^E scaling is implicit
        scale = c * den ** (E - e)
        for j, binom in enumerate(_binomial_row(e)):
            coef = scale * binom * (lin_sign * den) ** j * shift ** (e - j)
            if coef:
                q = p[:i] + (j,) + p[i + 1:]
                acc[q] = acc.get(q, 0) + coef
    return MultiPoly(f.variables, acc)


def difference_transform(f: MultiPoly) -> MultiPoly:
    """``f(x_1 - x_1', ..., x_d - x_d')`` over ``2d`` variables."""
    names = f.variables + tuple(v + "'" for v in f.variables)
    acc: dict[Exponent, int] = {}
    for p, c in f.terms.items():
        partial: dict[Exponent, int] = {(): c}
        for e in p:
            row = _binomial_row(e)
            nxt: dict[Exponent, int] = {}
            for key, val in partial.items():
                for j, binom in enumerate(row):
                    # x^j * (-x')^(e-j)
                    coef = val * binom * (-1 if (e - j) & 1 else 1)
                    k2 = key + ((j, e - j),)
                    nxt[k2] = nxt.get(k2, 0) + coef
            partial = nxt
        for key, val in partial.items():
            q = tuple(a for a, _ in key) + tuple(b for _, b in key)
            acc[q] = acc.get(q, 0) + val
    return MultiPoly(names, acc)


# ---------------------------------------------------------------------------
# interval arithmetic


def _interval_pow(lo: Fraction, hi: Fraction, e: int) -> tuple[Fraction, Fraction]:
    if e == 0:
        return Fraction(1), Fraction(1)
    a, b = lo**e, hi**e
    if e % 2 == 0 and lo < 0 < hi:
        return Fraction(0), max(a, b)
    return (a, b) if a <= b else (b, a)


def interval_evaluate(f: MultiPoly, box: Sequence[tuple[Rational, Rational]]) -> tuple[Fraction, Fraction]:
    """Exact enclosure of ``f`` over a box of closed rational intervals."""
    if len(box) != f.dimension:
        raise ValueError("box dimension mismatch")
    box = [(Fraction(lo), Fraction(hi)) for lo, hi in box]
    pow_cache: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    total_lo = total_hi = Fraction(0)
    for p, c in f.terms.items():
        lo = hi = Fraction(c)
        for i, e in enumerate(p):
            if not e:
                continue
            key = (i, e)
            if key not in pow_cache:
                pow_cache[key] = _interval_pow(*box[i], e)
            a, b = pow_cache[key]
            prods = (lo * a, lo * b, hi * a, hi * b)
            lo, hi = min(prods), max(prods)
        total_lo += lo
        total_hi += hi
    return total_lo, total_hi
