"""Real root isolation and real algebraic numbers.

Roots in the open unit interval are isolated by Descartes' rule of signs with
bisection (the Vincent-Collins-Akritas family).  Sturm sequences are provided
as an independent counting routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .poly import Rational, UniPoly


class EndpointIsRoot(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer coefficient helpers (lists, lowest degree first)


def _strip(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def primitive(coeffs: Sequence[int]) -> list[int]:
    """Divide by the content and make the leading coefficient positive."""
    cs = _strip([int(c) for c in coeffs])
    if not cs:
        return cs
    g = math.gcd(*cs)
    if cs[-1] < 0:
        g = -g
    return [c // g for c in cs]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def sign_at(coeffs: Sequence[int], q: Rational) -> int:
    """Sign of the integer polynomial at a rational point, without fractions."""
    q = Fraction(q)
    a, b = q.numerator, q.denominator
    n = len(coeffs) - 1
    if n < 0:
        return 0
    acc = coeffs[n]
    bpow = 1
    for i in range(n - 1, -1, -1):
        bpow *= b
        acc = acc * a + coeffs[i] * bpow
    return _sign(acc)


def sign_variations(coeffs: Sequence[int]) -> int:
    count, last = 0, 0
    for c in coeffs:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                count += 1
            last = s
    return count


def taylor_shift_one(coeffs: Sequence[int]) -> list[int]:
    """Coefficients of ``p(x + 1)``."""
    a = list(coeffs)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _derivative(cs: Sequence) -> list:
    return [i * c for i, c in enumerate(cs)][1:]


def _divide_linear_root_one(cs: list[int]) -> list[int]:
    # synthetic division by (x - 1); caller guarantees exactness
    n = len(cs) - 1
    out = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = acc + cs[i]
        out[i - 1] = acc
    return out


def squarefree_part(f: UniPoly) -> UniPoly:
    """``f / gcd(f, f')`` made primitive with positive leading coefficient."""
    import flint

    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    F = flint.fmpz_poly([int(c) for c in f.coeffs])
    if f.degree <= 0:
        return UniPoly([1])
    g = F.gcd(F.derivative())
    q = F // g if g.degree() > 0 else F
    return UniPoly(primitive([int(c) for c in q.coeffs()]))


# ---------------------------------------------------------------------------
# real algebraic numbers


@dataclass(frozen=True)
class RealAlgebraicNumber:
    """A real root of ``defining``, pinned by an open isolating interval or given exactly.

    In interval form ``defining`` changes sign strictly between the endpoints
    and has exactly one real root there.
    """

    defining: UniPoly
    interval: Optional[tuple[Fraction, Fraction]] = None
    exact: Optional[Fraction] = None

    @classmethod
    def rational(cls, q: Rational) -> "RealAlgebraicNumber":
        q = Fraction(q)
        return cls(UniPoly([-q.numerator, q.denominator]), None, q)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def width(self) -> Fraction:
        return Fraction(0) if self.is_exact else self.interval[1] - self.interval[0]

    def bounds(self) -> tuple[Fraction, Fraction]:
        return (self.exact, self.exact) if self.is_exact else self.interval

    def __str__(self):
        if self.is_exact:
            return str(self.exact)
        lo, hi = self.interval
        return f"<{self.defining}, ]{lo}, {hi}[>"


def isolate_in_unit_interval(f: UniPoly) -> list[RealAlgebraicNumber]:
    """All real roots of ``f`` strictly between 0 and 1, left to right."""
    if f.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    P = list(squarefree_part(f).coeffs)
    # roots at the endpoints are outside the open interval; remove them so
    # every reported interval sees a strict sign change
    while P and P[0] == 0:
        P = P[1:]
    while len(P) > 1 and sum(P) == 0:
        P = _divide_linear_root_one(P)
    P = primitive(P)
    if len(P) <= 1:
        return []
    poly = UniPoly(P)
    if len(P) == 2:
        root = Fraction(-P[0], P[1])
        return [RealAlgebraicNumber.rational(root)] if 0 < root < 1 else []
    found: list[tuple[Fraction, RealAlgebraicNumber]] = []
    stack = [(P, 0, 0)]  # Q(x) has the roots of P in ]c/2^k, (c+1)/2^k[ mapped to ]0,1[
    while stack:
        Q, c, k = stack.pop()
        if len(Q) <= 1:
            continue
        v = sign_variations(taylor_shift_one(Q[::-1]))
        if v == 0:
            continue
        lo, hi = Fraction(c, 1 << k), Fraction(c + 1, 1 << k)
        if v == 1 and k > 0:
            found.append((lo, RealAlgebraicNumber(poly, (lo, hi))))
            continue
        n = len(Q) - 1
        left = [q << (n - i) for i, q in enumerate(Q)]  # 2^n Q(x/2)
        if sum(left) == 0:
            mid = Fraction(2 * c + 1, 1 << (k + 1))
            found.append((mid, RealAlgebraicNumber.rational(mid)))
            left = _divide_linear_root_one(left)
        left = primitive(left)
        stack.append((taylor_shift_one(left), 2 * c + 1, k + 1))
        stack.append((left, 2 * c, k + 1))
    found.sort(key=lambda item: item[0])
    exact = [x.exact for _, x in found if x.is_exact]
    if exact and len(exact) < len(found):
        # a midpoint root can be the endpoint of a neighbouring interval;
        # divide it out so every interval sees a strict sign change
        reduced = P
        for q in exact:
            reduced = _divide_linear(reduced, q.numerator, q.denominator)
        poly = UniPoly(primitive(reduced))
        return [x if x.is_exact else RealAlgebraicNumber(poly, x.interval) for _, x in found]
    return [x for _, x in found]


def _divide_linear(cs: list[int], num: int, den: int) -> list[int]:
    # exact division by (den*y - num)
    n = len(cs) - 1
    out = [0] * n
    rem = list(cs)
    for i in range(n, 0, -1):
        q, r = divmod(rem[i], den)
        if r:
            raise ArithmeticError("inexact division")
        out[i - 1] = q
        rem[i - 1] += q * num
    if rem[0]:
        raise ArithmeticError("inexact division")
    return out


def refine(x: RealAlgebraicNumber, width: Rational) -> RealAlgebraicNumber:
    """Bisect until the isolating interval is no wider than ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if x.is_exact:
        return x
    P = x.defining.coeffs
    lo, hi = x.interval
    s_lo = sign_at(P, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = sign_at(P, mid)
        if s == 0:
            return RealAlgebraicNumber(x.defining, None, mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return RealAlgebraicNumber(x.defining, (lo, hi))


def affine_image(x: RealAlgebraicNumber, a: Rational, b: Rational) -> RealAlgebraicNumber:
    """The number ``a + b*x``."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return RealAlgebraicNumber.rational(a)
    if x.is_exact:
        return RealAlgebraicNumber.rational(a + b * x.exact)
    # b^n P((w - a)/b) by Horner in w
    P = x.defining.coeffs
    n = len(P) - 1
    H = [Fraction(P[n])]
    bpow = Fraction(1)
    for i in range(n - 1, -1, -1):
        bpow *= b
        nxt = [Fraction(0)] * (len(H) + 1)
        for j, h in enumerate(H):
            nxt[j + 1] += h
            nxt[j] -= a * h
        nxt[0] += P[i] * bpow
        H = nxt
    den = math.lcm(*(h.denominator for h in H))
    defining = UniPoly(primitive([int(h * den) for h in H]))
    lo, hi = a + b * x.interval[0], a + b * x.interval[1]
    if lo > hi:
        lo, hi = hi, lo
    return RealAlgebraicNumber(defining, (lo, hi))


def decimal_string(q: Fraction, digits: int) -> str:
    scaled = round(Fraction(q) * 10**digits)
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + s
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def approximate(x: RealAlgebraicNumber, digits: int = 6) -> str:
    """Decimal string within ``10**-digits`` of ``x``."""
    if digits < 0:
        raise ValueError("digits must be non-negative")
    # bisect until both endpoints round alike; the floor on the width only
    # matters for a value sitting exactly on a rounding boundary
    floor = Fraction(1, 10 ** (digits + 30))
    scale = 10**digits
    while not x.is_exact:
        lo, hi = x.interval
        if round(lo * scale) == round(hi * scale) or hi - lo <= floor:
            return decimal_string((lo + hi) / 2, digits)
        x = refine(x, (hi - lo) / 2)
    return decimal_string(x.exact, digits)


# ---------------------------------------------------------------------------
# Sturm sequences


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        coef = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[i + shift] -= coef * bi
        a.pop()
        _strip(a)
    return a


def sturm_sequence(f: UniPoly) -> list[list[Fraction]]:
    s0 = [Fraction(c) for c in f.coeffs]
    s1 = _derivative(s0)
    seq = [s0]
    while s1:
        seq.append(s1)
        s0, s1 = s1, [-c for c in _poly_rem(s0, s1)]
    return seq


def sturm_count(f: UniPoly, a: Rational, b: Rational) -> int:
    """Number of distinct real roots of ``f`` in the open interval ``]a, b[``."""
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if f(a) == 0 or f(b) == 0:
        raise EndpointIsRoot(f"polynomial vanishes at an endpoint of ]{a}, {b}[")
    seq = sturm_sequence(f)

    def variations(x):
        return sign_variations([_poly_value(s, x) for s in seq])

    return variations(a) - variations(b)


def _poly_value(cs, x):
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc
