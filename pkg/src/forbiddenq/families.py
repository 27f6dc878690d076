"""Certified generators of forbidden conductor values.

Two constructions emit verified non-unit-weight loops:

* integer points on the conic b**2 - 3ab + a**2 = +-1 (consecutive-index
  Fibonacci pairs, i.e. units of a real quadratic ring) give rational values
  q = a/b accumulating at (3 +- sqrt(5))/2, each with the length-5 loop
  (1, -1, 1, -1, -(2b**2 - ab)/(b**2 - 3ab + a**2)) of squared weight 1/b**4;

* integer-level crossings of the continuant ratio just above each point of
  ``u_set(n)`` give values accumulating at that point from the right,
  emitted exactly when the level polynomial has a rational root in the
  admissible interval and as certified algebraic numbers otherwise.

A float-only enumerator of the classical dense family (4/n) cos(pi l/(2k+1))**2
and the quadratic-target calculator for general length-5 loops round out the
module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .exact import AlgebraicNumber, IntPoly, isolate_root, poly_eval
from .continuants import ratio_in_q, u_set
from .loops import (
    ALG_INTERVAL_WIDTH,
    FormulaWeight,
    LoopWitness,
    evaluate_path,
    lemma_weight_squared,
    shifted_alternating_loop,
    verify_witness,
    weight_squared,
    STATUS_LOOP,
)


class EmptyInterval(ValueError):
    """No admissible right endpoint above the accumulation point."""


class NoRoot(ValueError):
    """No admissible level crossing was found."""


class NegativeDiscriminant(ValueError):
    """The quadratic-target discriminant is negative; no real targets."""


def norm_form(a: int, b: int) -> int:
    """The quadratic form b**2 - 3ab + a**2 (symmetric in a and b)."""
    return b * b - 3 * a * b + a * a


def fibonacci(k: int) -> int:
    """F_k with F_1 = F_2 = 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    a, b = 1, 1
    for _ in range(k - 2):
        a, b = b, a + b
    return b if k > 1 else a


def norm_unit_pairs(limit: int) -> list[tuple[int, int]]:
    """All pairs 1 <= b < a <= limit with norm_form(a, b) = +-1, by brute scan.

    Independent confirmation that the solutions are exactly the Fibonacci
    pairs (F_{k+2}, F_k).
    """
    out = []
    for a in range(2, limit + 1):
        for b in range(1, a):
            if norm_form(a, b) in (-1, 1):
                out.append((a, b))
    return sorted(out)


@dataclass(frozen=True)
class PellWitness:
    """A rational forbidden value from a unit of the norm form."""

    k: int
    a: int
    b: int
    q: Fraction
    witness: LoopWitness


def pell_witnesses(count: int, reciprocal: bool = False) -> list[PellWitness]:
    """First ``count`` verified witnesses from the Fibonacci pairs.

    Index k runs 2, 3, 4, ... over (a, b) = (F_{k+2}, F_k); indices with
    F_k = 1 are skipped (they violate b**2 > 1).  With ``reciprocal`` the
    pair is swapped to (F_k, F_{k+2}), giving values that accumulate at
    (3 - sqrt(5))/2 instead of (3 + sqrt(5))/2.  Every witness is re-verified
    in exact arithmetic before being returned.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    out: list[PellWitness] = []
    k = 2
    while len(out) < count:
        if fibonacci(k) == 1:
            k += 1
            continue
        a, b = fibonacci(k + 2), fibonacci(k)
        if reciprocal:
            a, b = b, a
        nf = norm_form(a, b)
        if nf not in (-1, 1):
            raise ArithmeticError(f"norm form is not a unit at (a, b)=({a}, {b})")
        if b * b <= 1 or Fraction(a, b) in (1, 2):
            raise ArithmeticError(f"pair (a, b)=({a}, {b}) violates the side conditions")
        last = -(2 * b * b - a * b) // nf
        loop = (1, -1, 1, -1, last)
        q = Fraction(a, b)
        w2 = weight_squared(q, loop)
        if (
            evaluate_path(q, loop).status != STATUS_LOOP
            or w2 != Fraction(1, b**4)
            or w2 != lemma_weight_squared(4, last - 1, q)
        ):
            raise ArithmeticError(f"witness verification failed at (a, b)=({a}, {b})")
        wit = LoopWitness(q=q, loop=loop, weight_squared=w2, provenance="pell",
                          verified=True)
        out.append(PellWitness(k=k, a=a, b=b, q=q, witness=wit))
        k += 1
    return out


def golden_targets(eps: Fraction = Fraction(1, 10**40)) -> tuple[AlgebraicNumber, AlgebraicNumber]:
    """Certified enclosures of (3 - sqrt(5))/2 and (3 + sqrt(5))/2."""
    p = IntPoly([1, -3, 1])
    return isolate_root(p, 0, 1, eps), isolate_root(p, 2, 3, eps)


@dataclass(frozen=True)
class DarbouxWitness:
    """A forbidden value isolated just above an accumulation point t0."""

    n: int
    t0: AlgebraicNumber
    c_k: int
    epsilon: int
    q: Union[Fraction, AlgebraicNumber]
    witness: LoopWitness
    t1_approx: float


def _coprime_square_floats(k: int) -> list[float]:
    return [
        4.0 * math.cos(math.pi * j / (k + 1)) ** 2
        for j in range(1, k + 1)
        if math.gcd(j, k + 1) == 1
    ]


def _t1_approx(n: int, t0f: float) -> float:
    """Right endpoint: nearest obstruction above t0, capped at 4.

    Obstructions are the accumulation sets of the other relevant orders
    (1..n-1 and n+1) and the roots of the ratio denominator, i.e. every
    squared root of g_n.
    """
    cands = [4.0]
    for k in itertools.chain(range(1, n), (n + 1,)):
        cands.extend(v for v in _coprime_square_floats(k) if v > t0f + 1e-9)
    cands.extend(
        v
        for j in range(1, (n + 1) // 2 + 1)
        if (v := 4.0 * math.cos(math.pi * j / (n + 1)) ** 2) > t0f + 1e-9
    )
    return min(cands)


def _rational_probe(num: IntPoly, den: IntPoly, t0f: float, t1f: float) -> Fraction:
    """A rational point strictly inside (t0, t1) avoiding roots of num and den."""
    span = t1f - t0f
    for frac in (0.5, 0.37, 0.61, 0.43, 0.57):
        r = Fraction(t0f + frac * span).limit_denominator(10**6)
        if t0f + 1e-9 < float(r) < t1f - 1e-9:
            if poly_eval(num, r) != 0 and poly_eval(den, r) != 0:
                return r
    raise NoRoot("could not place a probe point inside the interval")


def _rational_roots(p: IntPoly) -> list[Fraction]:
    """All rational roots of a non-zero integer polynomial, exactly."""
    cs = list(p.coeffs)
    roots: set[Fraction] = set()
    while cs and cs[0] == 0:
        roots.add(Fraction(0))
        cs.pop(0)
    if len(cs) <= 1:
        return sorted(roots)

    def divisors(x: int) -> list[int]:
        x = abs(x)
        out = []
        d = 1
        while d * d <= x:
            if x % d == 0:
                out.append(d)
                out.append(x // d)
            d += 1
        return sorted(set(out))

    body = IntPoly(cs)
    for pnum in divisors(cs[0]):
        for pden in divisors(cs[-1]):
            for cand in (Fraction(pnum, pden), Fraction(-pnum, pden)):
                if body.eval(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _root_in_interval(
    target: IntPoly, t0: AlgebraicNumber, t0f: float, t1f: float
) -> Optional[Union[Fraction, AlgebraicNumber]]:
    """Smallest root of ``target`` in (t0, t1), exact when rational.

    Returns None when no root lies in the interval.  Rational roots are
    confirmed exactly, including the comparison against t0; float roots are
    bracketed away from their neighbours and certified by sign change.
    """
    margin = 1e-9
    rational = [
        r
        for r in _rational_roots(target)
        if float(r) < t1f - margin and t0.compare_rational(r) < 0
    ]
    complex_roots = np.roots(list(reversed(target.coeffs)))
    reals = sorted(float(z.real) for z in complex_roots if abs(z.imag) < 1e-9)
    inside = [r for r in reals if t0f + margin < r < t1f - margin]
    if not inside:
        return rational[0] if rational else None
    r = inside[0]
    if rational and abs(float(rational[0]) - r) < 1e-6:
        return rational[0]
    fences = [x for x in reals if abs(x - r) > 1e-12] + [t0f, t1f]
    gap = min(abs(x - r) for x in fences) / 2
    lo = Fraction(r - gap).limit_denominator(10**12)
    hi = Fraction(r + gap).limit_denominator(10**12)
    rf = Fraction(r)
    for _ in range(60):
        if lo < hi and poly_eval(target, lo) * poly_eval(target, hi) < 0:
            return isolate_root(target, lo, hi, Fraction(1, 10**12))
        lo = (lo + rf) / 2
        hi = (hi + rf) / 2
    return None


def darboux_witnesses(
    n: int, u_index: int, count: int, min_c: int = 3
) -> list[DarbouxWitness]:
    """Verified witnesses accumulating at ``u_set(n)[u_index]`` from above.

    With (num, den) = ratio_in_q(n), t0 the chosen accumulation point and
    eps the constant sign of num/den on (t0, t1), each integer level
    c_k = min_c, min_c + 1, ... is solved via num(q) - eps*c_k*den(q) = 0
    inside (t0, t1); a root gives the loop
    (1, -1, ..., (-1)**(n-1), (-1)**n - eps*c_k) at q.  Levels with no root
    in the interval are skipped.  ``min_c`` below 3 explores levels outside
    the existence argument; any witness that does verify is still a genuine
    certificate.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    points = u_set(n)
    if not 0 <= u_index < len(points):
        raise ValueError(f"u_index {u_index} out of range for {len(points)} points")
    t0 = points[u_index]
    num, den = ratio_in_q(n)
    t0f = t0.approx
    t1f = _t1_approx(n, t0f)
    if t1f <= t0f + 1e-12:
        raise EmptyInterval(f"no admissible interval above t0={t0f}")
    probe = _rational_probe(num, den, t0f, t1f)
    epsilon = 1 if poly_eval(num, probe) * poly_eval(den, probe) > 0 else -1
    sign_n = (-1) ** n

    out: list[DarbouxWitness] = []
    misses = 0
    for c_k in itertools.count(max(1, min_c)):
        if len(out) >= count:
            break
        if misses > 200:
            raise NoRoot(f"no admissible level crossings found above t0={t0f}")
        target = num - (epsilon * c_k) * den
        qval = _root_in_interval(target, t0, t0f, t1f)
        if qval is None:
            misses += 1
            continue
        shift = -epsilon * c_k
        loop = shifted_alternating_loop(n, shift)
        if isinstance(qval, Fraction):
            w2 = weight_squared(qval, loop)
            if w2 != lemma_weight_squared(n, shift, qval):
                raise ArithmeticError(f"weight mismatch at q={qval}")
            draft = LoopWitness(q=qval, loop=loop, weight_squared=w2,
                                provenance="darboux", verified=True)
            wit = replace(draft, verified=verify_witness(draft))
        else:
            qval = qval.refine(ALG_INTERVAL_WIDTH)
            mid = (qval.lo + qval.hi) / 2
            w2f = float(lemma_weight_squared(n, shift, mid))
            fw = FormulaWeight(n=n, c=shift, approx=w2f)
            draft = LoopWitness(q=qval, loop=loop, weight_squared=fw,
                                provenance="darboux", verified=True)
            wit = replace(draft, verified=verify_witness(draft))
        if not wit.verified:
            raise ArithmeticError(f"witness verification failed at level {c_k}")
        out.append(
            DarbouxWitness(n=n, t0=t0, c_k=c_k, epsilon=epsilon, q=qval,
                           witness=wit, t1_approx=t1f)
        )
    return out


def cos2_family(max_k: int, max_n: int) -> list[float]:
    """The classical dense family (4/n) cos(pi*l/(2k+1))**2, floats only.

    Enumerates k <= max_k, 1 <= l < 2k+1 with gcd(l, 2k+1) = 1 and
    2 <= n <= max_n; sorted and deduplicated to 1e-12.  Density evidence for
    (0, 2), with no certificates attached.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    vals = []
    for k in range(1, max_k + 1):
        mod = 2 * k + 1
        for ell in range(1, mod):
            if math.gcd(ell, mod) != 1:
                continue
            c2 = math.cos(math.pi * ell / mod) ** 2
            for n in range(2, max_n + 1):
                vals.append(4.0 * c2 / n)
    vals.sort()
    out: list[float] = []
    for v in vals:
        if not out or v - out[-1] > 1e-12:
            out.append(v)
    return out


def quadratic_targets(m0: int, m1: int, m2: int, m3: int) -> tuple[float, float]:
    """Accumulation targets reachable by length-5 loops with these entries.

    With u = 1/(m1 m2), v1 = 1/(m0 m1), v2 = 1/(m2 m3), returns the two
    numbers w = (-u - v1 - v2 +- sqrt(disc))/2 where
    disc = u**2 + v1**2 + v2**2 - 2 v1 v2 + 2 u v1 + 2 u v2, larger first.
    For entries starting (e, -e, e) the larger target never exceeds
    (3 + sqrt(5))/2.
    """
    if m0 * m1 * m2 * m3 == 0:
        raise ValueError("all four entries must be non-zero")
    u = Fraction(1, m1 * m2)
    v1 = Fraction(1, m0 * m1)
    v2 = Fraction(1, m2 * m3)
    disc = u * u + v1 * v1 + v2 * v2 - 2 * v1 * v2 + 2 * u * v1 + 2 * u * v2
    if disc < 0:
        raise NegativeDiscriminant(f"discriminant {disc} < 0; no real targets")
    s = float(-u - v1 - v2)
    root = math.sqrt(float(disc))
    return (s + root) / 2, (s - root) / 2
