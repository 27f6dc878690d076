import math
import random
from fractions import Fraction

import pytest

from forbiddenq.exact import (
    AlgebraicNumber,
    IntPoly,
    NoSignChange,
    isolate_root,
    merge_parity,
    parity_split,
    poly_eval,
)


def rand_poly(rng, max_deg=6, bound=9):
    return IntPoly([rng.randint(-bound, bound) for _ in range(rng.randint(0, max_deg + 1))])


def rand_frac(rng, bound=20):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def test_intpoly_canonical():
    assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPoly([]).is_zero
    assert IntPoly([0, 0]).is_zero
    assert IntPoly([3]).degree == 0
    assert IntPoly().degree == -1


def test_poly_eval_examples():
    assert poly_eval(IntPoly([1]), Fraction(7, 3)) == 1
    assert poly_eval(IntPoly([1, -3, 1]), Fraction(3)) == 1
    assert poly_eval(IntPoly([1, 0, -1]), Fraction(1)) == 0


def test_poly_eval_respects_ring_ops():
    rng = random.Random(101)
    for _ in range(200):
        p, r = rand_poly(rng), rand_poly(rng)
        x = rand_frac(rng)
        assert poly_eval(p + r, x) == poly_eval(p, x) + poly_eval(r, x)
        assert poly_eval(p * r, x) == poly_eval(p, x) * poly_eval(r, x)


def test_parity_split_examples():
    even, odd = parity_split(IntPoly([1, 0, -1]))
    assert even == IntPoly([1, -1]) and odd == IntPoly([])
    even, odd = parity_split(IntPoly([0, 3, 0, -4, 0, 1]))
    assert even == IntPoly([]) and odd == IntPoly([3, -4, 1])
    even, odd = parity_split(IntPoly([1, 1]))
    assert even == IntPoly([1]) and odd == IntPoly([1])


def test_parity_split_round_trip():
    rng = random.Random(202)
    for _ in range(200):
        p = rand_poly(rng, max_deg=9)
        assert merge_parity(*parity_split(p)) == p


def test_parity_split_identity_pointwise():
    rng = random.Random(203)
    for _ in range(100):
        p = rand_poly(rng)
        even, odd = parity_split(p)
        x = rand_frac(rng)
        assert poly_eval(p, x) == poly_eval(even, x * x) + x * poly_eval(odd, x * x)


def test_isolate_root_golden_ratio_like():
    alg = isolate_root(IntPoly([1, -3, 1]), 2, 3, Fraction(1, 10**12))
    assert alg.width <= Fraction(1, 10**12)
    assert abs(alg.approx - (3 + math.sqrt(5)) / 2) < 1e-11


def test_isolate_root_known_rational_root():
    alg = isolate_root(IntPoly([1, 0, -1]), Fraction(1, 2), 2)
    assert abs(alg.approx - 1.0) < 1e-9
    assert alg.lo < 1 < alg.hi


def test_isolate_root_vs_bisection_oracle():
    # independent oracle: plain float bisection on 5q^2 - 16q + 7
    f = lambda x: 5 * x * x - 16 * x + 7
    lo, hi = 2.5, 3.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    alg = isolate_root(IntPoly([7, -16, 5]), Fraction(5, 2), 3, Fraction(1, 10**12))
    assert abs(alg.approx - lo) < 1e-9
    assert abs(alg.approx - (8 + math.sqrt(29)) / 5) < 1e-11


def test_isolate_root_no_sign_change():
    with pytest.raises(NoSignChange):
        isolate_root(IntPoly([1, 0, 1]), 0, 1)
    with pytest.raises(NoSignChange):
        isolate_root(IntPoly([1, -3, 1]), 3, 4)


def test_isolate_root_defensive_square_free():
    # (q - 1) * (q - 3)**2 on [0, 2]: the double root outside the bracket
    # must not defeat isolation of the simple root at 1
    p = IntPoly([-9, 15, -7, 1])
    alg = isolate_root(p, 0, 2)
    assert abs(alg.approx - 1.0) < 1e-9
    assert alg.defining.degree == 2


def test_sign_change_certificate_reevaluates():
    for p, lo, hi in [
        (IntPoly([1, -3, 1]), Fraction(2), Fraction(3)),
        (IntPoly([7, -16, 5]), Fraction(5, 2), Fraction(3)),
        (IntPoly([-1, 0, 0, 1]), Fraction(0), Fraction(2)),
    ]:
        alg = isolate_root(p, lo, hi, Fraction(1, 10**15))
        vlo = poly_eval(alg.defining, alg.lo)
        vhi = poly_eval(alg.defining, alg.hi)
        assert (vlo > 0) != (vhi > 0) and vlo != 0 and vhi != 0


def test_algebraic_number_validation():
    p = IntPoly([1, -3, 1])
    with pytest.raises(ValueError):
        AlgebraicNumber(p, Fraction(3), Fraction(2), 2.5)
    with pytest.raises(NoSignChange):
        AlgebraicNumber(p, Fraction(3), Fraction(4), 3.5)
    with pytest.raises(ValueError):
        AlgebraicNumber(p, Fraction(2), Fraction(3), 5.0)


def test_refine_and_compare():
    alg = isolate_root(IntPoly([1, -3, 1]), 2, 3)
    fine = alg.refine(Fraction(1, 10**30))
    assert fine.width <= Fraction(1, 10**30)
    assert fine.lo >= alg.lo and fine.hi <= alg.hi
    assert alg.compare_rational(Fraction(5, 2)) > 0
    assert alg.compare_rational(3) < 0
    assert alg.compare_rational(Fraction(2618034, 10**6)) < 0
    assert alg.compare_rational(Fraction(2618033, 10**6)) > 0
    one = isolate_root(IntPoly([1, 0, -1]), Fraction(1, 2), 2)
    assert one.compare_rational(1) == 0
