"""Continuant polynomial families for integer coefficient sequences.

``f_poly`` builds, by the three-term recurrence, the polynomial whose ratios
reproduce the prefix values of the continued-fraction evaluator in
:mod:`forbiddenq.loops`.  ``f_explicit`` rebuilds the same polynomial by
direct subset enumeration and serves as an independent oracle.

The alternating-sign specialization ``g_poly(n)`` behaves like a rescaled
Chebyshev family: its roots are 2*cos(pi*j/(n+1)), consecutive members
satisfy g_n**2 + g_{n+1} g_{n-1} = 1, and the squares of the roots with
index coprime to n+1 form the accumulation sets returned by ``u_set``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import (
    AlgebraicNumber,
    IntPoly,
    isolate_root,
    parity_split,
    poly_eval,
)

EXPLICIT_CUTOFF = 12


class CutoffExceeded(ValueError):
    """Subset enumeration refused: the sequence is longer than the cutoff."""


def f_poly(m: Sequence[int]) -> IntPoly:
    """Continuant polynomial of ``m`` via the recurrence.

    f_0 = 1, f_1 = m_0 * x, and f_{j+1} = m_j * x * f_j + f_{j-1}.  The
    result has degree len(m) with leading coefficient prod(m) whenever all
    entries are non-zero.
    """
    prev = IntPoly([1])
    if len(m) == 0:
        return prev
    x = IntPoly([0, 1])
    cur = IntPoly([0, m[0]])
    for mj in m[1:]:
        prev, cur = cur, int(mj) * (x * cur) + prev
    return cur


def f_explicit(m: Sequence[int], cutoff: int = EXPLICIT_CUTOFF) -> IntPoly:
    """Independent oracle for :func:`f_poly` by direct subset enumeration.

    Sums prod(m_i for i in I) into the coefficient of x**|I| over every
    subset I of [0, len(m)) such that each i in I has i == |I \\cap [0, i)|
    (mod 2), keeping only |I| == len(m) (mod 2).  Exponential bookkeeping,
    so refuses sequences longer than ``cutoff``.
    """
    n = len(m)
    if n > cutoff:
        raise CutoffExceeded(f"sequence length {n} exceeds enumeration cutoff {cutoff}")
    coeffs = [0] * (n + 1)

    def walk(i: int, size: int, prod: int) -> None:
        if i == n:
            if size % 2 == n % 2:
                coeffs[size] += prod
            return
        walk(i + 1, size, prod)
        if i % 2 == size % 2:
            walk(i + 1, size + 1, prod * m[i])

    walk(0, 0, 1)
    return IntPoly(coeffs)


@lru_cache(maxsize=None)
def g_poly(n: int) -> IntPoly:
    """Continuant of the alternating sequence (1, -1, ..., (-1)**(n-1))."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return f_poly(tuple((-1) ** i for i in range(n)))


def g_roots(n: int) -> list[float]:
    """The n roots of ``g_poly(n)``, 2*cos(pi*j/(n+1)), in decreasing order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [2.0 * math.cos(math.pi * j / (n + 1)) for j in range(1, n + 1)]


def eval_g_float(n: int, x: float) -> float:
    """Float value of ``g_poly(n)`` at ``x`` via the recurrence.

    Numerically backward-stable where monomial Horner on the stored
    coefficients loses precision (observed up to ~4e-6 residual at the
    extreme degree-30 roots, versus ~4e-13 for this scheme).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    prev, cur = 1.0, x
    if n == 0:
        return prev
    for i in range(1, n):
        prev, cur = cur, ((-1) ** i) * x * cur + prev
    return cur


def g_identity_check(n: int) -> bool:
    """Exact coefficient check of g_n**2 + g_{n+1} g_{n-1} == 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g = g_poly(n)
    return g * g + g_poly(n + 1) * g_poly(n - 1) == IntPoly([1])


def ratio_in_q(n: int) -> tuple[IntPoly, IntPoly]:
    """Numerator and denominator in q of g_{n+1}(x) / (x g_n(x)) with q = x**2.

    g_n has the parity of n, so for even n the ratio is odd-part(g_{n+1})
    over even-part(g_n), and for odd n it is even-part(g_{n+1}) over
    q * odd-part(g_n).  The pair is reduced by common integer content only.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    even_hi, odd_hi = parity_split(g_poly(n + 1))
    even_lo, odd_lo = parity_split(g_poly(n))
    if n % 2 == 0:
        num, den = odd_hi, even_lo
    else:
        num, den = even_hi, IntPoly([0, 1]) * odd_lo
    c = math.gcd(num.content(), den.content())
    if c > 1:
        num = IntPoly([x // c for x in num.coeffs])
        den = IntPoly([x // c for x in den.coeffs])
    return num, den


def _distinct_square_roots(n: int) -> list[float]:
    """Distinct values 4*cos(pi*j/(n+1))**2 over j = 1..n, increasing."""
    vals = [4.0 * math.cos(math.pi * j / (n + 1)) ** 2 for j in range(1, (n + 1) // 2 + 1)]
    return sorted(vals)


def u_set(n: int, eps: Fraction = Fraction(1, 10**12)) -> list[AlgebraicNumber]:
    """Certified squared roots of ``g_poly(n)`` with index coprime to n+1.

    Each element is 4*cos(pi*j/(n+1))**2 for some 1 <= j <= n with
    gcd(j, n+1) = 1, returned as an :class:`AlgebraicNumber` whose defining
    polynomial is the denominator from :func:`ratio_in_q` (the parity part of
    g_n rewritten in q).  That polynomial has extra roots for non-coprime j;
    the isolating interval pins the intended one.  Sorted increasing.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _, den = ratio_in_q(n)
    all_roots = _distinct_square_roots(n)
    targets = sorted(
        {
            min(j, n + 1 - j)
            for j in range(1, n + 1)
            if math.gcd(j, n + 1) == 1
        },
        reverse=True,
    )
    out = []
    for j in targets:
        v = 4.0 * math.cos(math.pi * j / (n + 1)) ** 2
        i = min(range(len(all_roots)), key=lambda k: abs(all_roots[k] - v))
        left = all_roots[i - 1] if i > 0 else v - 1.0
        right = all_roots[i + 1] if i + 1 < len(all_roots) else v + 1.0
        lo = Fraction((left + v) / 2).limit_denominator(10**9)
        hi = Fraction((v + right) / 2).limit_denominator(10**9)
        vf = Fraction(v)
        for _ in range(60):
            if lo < hi and poly_eval(den, lo) * poly_eval(den, hi) < 0:
                break
            lo = (lo + vf) / 2
            hi = (hi + vf) / 2
        out.append(isolate_root(den, lo, hi, eps))
    out.sort(key=lambda a: a.approx)
    return out
