"""Exact arithmetic building blocks: integer polynomials and certified real roots.

Scalars are `fractions.Fraction` throughout.  Nothing in this module rounds
unless a float approximation is explicitly requested, and every isolated root
carries a sign-change certificate that can be re-checked in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
RationalLike = Union[Fraction, int]


class NoSignChange(ValueError):
    """A bisection bracket does not straddle a root: p(lo) * p(hi) >= 0."""


def _sign(x: Fraction) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


class IntPoly:
    """Dense univariate polynomial with arbitrary-precision integer coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``.  The representation is
    canonical: no trailing zero coefficient is stored, and the zero polynomial
    is the empty tuple.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("IntPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly([-c for c in self.coeffs])

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly([other * c for c in self.coeffs])
        if not isinstance(other, IntPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def __rmul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def eval(self, x: RationalLike) -> Fraction:
        """Exact Horner evaluation at a rational point."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        """Float Horner evaluation.

        Fine at low degree; for high-degree near-cancelling evaluations prefer
        an application-specific stable scheme.
        """
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        """Divide out the integer content (sign is preserved)."""
        g = self.content()
        if g <= 1:
            return self
        return IntPoly([c // g for c in self.coeffs])

    def square_free_part(self) -> "IntPoly":
        """Primitive quotient by gcd(p, p'); same roots, all simple."""
        if self.degree <= 1:
            return self.primitive()
        g = _poly_gcd(self, self.derivative())
        if g.degree <= 0:
            return self.primitive()
        return _exact_div(self, g).primitive()


def poly_eval(p: IntPoly, x: RationalLike) -> Fraction:
    """Exact value of ``p`` at the rational point ``x``."""
    return p.eval(x)


def parity_split(p: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Split ``p(x) = even(x**2) + x * odd(x**2)`` into its parity parts."""
    return IntPoly(p.coeffs[0::2]), IntPoly(p.coeffs[1::2])


def merge_parity(even: IntPoly, odd: IntPoly) -> IntPoly:
    """Inverse of :func:`parity_split`."""
    n = max(2 * len(even.coeffs), 2 * len(odd.coeffs) + 1)
    out = [0] * n
    for i, c in enumerate(even.coeffs):
        out[2 * i] = c
    for i, c in enumerate(odd.coeffs):
        out[2 * i + 1] = c
    return IntPoly(out)


def _trim(v: list[Fraction]) -> list[Fraction]:
    while v and v[-1] == 0:
        v.pop()
    return v


def _poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Polynomial gcd over the rationals, returned primitive with positive lead."""
    fa = _trim([Fraction(c) for c in a.coeffs])
    fb = _trim([Fraction(c) for c in b.coeffs])
    while fb:
        r = fa[:]
        d = len(fb) - 1
        lead = fb[-1]
        while len(r) - 1 >= d and r:
            factor = r[-1] / lead
            shift = len(r) - 1 - d
            for i in range(d + 1):
                r[shift + i] -= factor * fb[i]
            r.pop()
            _trim(r)
        fa, fb = fb, r
    if not fa:
        return IntPoly()
    den = 1
    for c in fa:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in fa]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPoly(ints)


def _exact_div(p: IntPoly, d: IntPoly) -> IntPoly:
    """Exact polynomial quotient; raises if the division leaves a remainder."""
    if d.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    r = [Fraction(c) for c in p.coeffs]
    dd = [Fraction(c) for c in d.coeffs]
    qdeg = len(r) - len(dd)
    if qdeg < 0:
        raise ValueError("degree of divisor exceeds degree of dividend")
    quot = [Fraction(0)] * (qdeg + 1)
    lead = dd[-1]
    work = r[:]
    for shift in range(qdeg, -1, -1):
        factor = work[shift + len(dd) - 1] / lead
        quot[shift] = factor
        if factor:
            for i in range(len(dd)):
                work[shift + i] -= factor * dd[i]
    if any(work):
        raise ValueError("inexact polynomial division")
    if any(c.denominator != 1 for c in quot):
        raise ValueError("quotient is not an integer polynomial")
    return IntPoly([int(c) for c in quot])


@dataclass(frozen=True)
class AlgebraicNumber:
    """A real algebraic number certified by a sign-change bracket.

    ``defining`` changes sign between ``lo`` and ``hi`` and has exactly one
    root there (guaranteed by the :func:`isolate_root` construction path,
    which bisects the square-free part of the input polynomial).  ``approx``
    is the float midpoint of the bracket at its final width.
    """

    defining: IntPoly
    lo: Fraction
    hi: Fraction
    approx: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("empty isolating interval")
        if _sign(self.defining.eval(self.lo)) * _sign(self.defining.eval(self.hi)) >= 0:
            raise NoSignChange("isolating interval lost its sign-change certificate")
        # the float midpoint can land one ulp outside a bracket narrower than
        # double precision; allow exactly that much slack
        pad = Fraction(math.ulp(abs(self.approx) or 1.0))
        if not (self.lo - pad <= Fraction(self.approx) <= self.hi + pad):
            raise ValueError("approx is not inside the isolating interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self) -> float:
        return self.approx

    def refine(self, eps: RationalLike) -> "AlgebraicNumber":
        """Shrink the isolating interval to width <= eps by bisection."""
        eps = Fraction(eps)
        if self.width <= eps:
            return self
        lo, hi = _bisect(self.defining, self.lo, self.hi, eps)
        return AlgebraicNumber(self.defining, lo, hi, float((lo + hi) / 2))

    def compare_rational(self, r: RationalLike) -> int:
        """-1, 0 or 1 as this value is below, equal to, or above ``r``."""
        r = Fraction(r)
        cur = self
        while True:
            if r <= cur.lo:
                return 1
            if r >= cur.hi:
                return -1
            if cur.defining.eval(r) == 0:
                return 0
            cur = cur.refine(cur.width / 4)


def _bisect(p: IntPoly, lo: Fraction, hi: Fraction, eps: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect a verified sign-change bracket of ``p`` down to width <= eps."""
    slo = _sign(p.eval(lo))
    while hi - lo > eps:
        mid = (lo + hi) / 2
        sm = _sign(p.eval(mid))
        if sm == 0:
            # the midpoint is the root itself; recover a strict bracket around it
            half = min(eps, mid - lo, hi - mid) / 2
            for _ in range(200):
                l2, h2 = mid - half, mid + half
                if _sign(p.eval(l2)) == slo and _sign(p.eval(h2)) == -slo:
                    return l2, h2
                half /= 2
            raise NoSignChange("could not re-establish a bracket around an exact root")
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def isolate_root(
    p: IntPoly,
    lo: RationalLike,
    hi: RationalLike,
    eps: RationalLike = Fraction(1, 10**12),
) -> AlgebraicNumber:
    """Isolate the root of ``p`` bracketed by ``(lo, hi)`` to width <= eps.

    The bracket must satisfy ``p(lo) * p(hi) < 0``.  The polynomial is
    defensively replaced by its square-free part before bisection, so the
    certified root is simple and the returned bracket keeps strictly opposite
    endpoint signs.
    """
    lo, hi, eps = Fraction(lo), Fraction(hi), Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if lo >= hi:
        raise ValueError("need lo < hi")
    if _sign(p.eval(lo)) * _sign(p.eval(hi)) >= 0:
        raise NoSignChange(f"no sign change of p on [{lo}, {hi}]")
    ps = p.square_free_part()
    if _sign(ps.eval(lo)) * _sign(ps.eval(hi)) >= 0:
        raise NoSignChange("square-free part has no sign change; bracket contains "
                           "an even-multiplicity root")
    lo2, hi2 = _bisect(ps, lo, hi, eps)
    return AlgebraicNumber(ps, lo2, hi2, float((lo2 + hi2) / 2))
