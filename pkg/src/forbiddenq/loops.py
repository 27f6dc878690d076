"""Path evaluation, exact loop weights, and the bounded non-unit-weight search.

An integer sequence m = (m_0, ..., m_k) is evaluated against a rational
q > 0 by the prefix recurrence c_0 = m_0, c_j = m_j + 1/(q * c_{j-1}).  The
sequence is a *path* while no proper prefix value hits zero, and a *loop*
when the final value is exactly zero.  The squared weight of a path,

    w2(q, m) = q**k * prod_{j<k} c_j**2,

is rational for rational q, and a loop with w2 != 1 certifies that q is
forbidden (q cannot be the conductor of a degree-two function).  Everything
here is exact; floats appear only in reported approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import AlgebraicNumber, RationalLike

STATUS_PATH = "path"
STATUS_LOOP = "loop"
STATUS_BROKEN = "broken"

# certification tolerances for witnesses at algebraic q
ALG_INTERVAL_WIDTH = Fraction(1, 10**20)
ALG_FINAL_C_TOL = Fraction(1, 10**12)


class NonPositiveQ(ValueError):
    """q must be a positive rational."""


class BrokenPath(ValueError):
    """Weight requested for a sequence that is not a path at q."""


class ZeroDenominator(ValueError):
    """The closed-form denominator vanishes at this q."""


class DegenerateC(ValueError):
    """Shift values 0 and (-1)**(n+1) always give unit weight; refused."""


class OutOfRange(ValueError):
    """q is outside the interval where this operation is defined."""


class BudgetExceeded(RuntimeError):
    """Enumeration bounds exceed the hard explosion guard."""


@dataclass(frozen=True)
class PathEval:
    """Prefix values and classification of a sequence at a fixed q.

    ``prefix_c[j]`` is c(q, (m_0..m_j)) for every index that is defined.
    ``status`` is "path", "loop", or "broken"; in the broken case
    ``broken_at`` is the first length j whose evaluation divides by zero,
    i.e. ``prefix_c[j-1] == 0``.
    """

    prefix_c: tuple[Fraction, ...]
    status: str
    broken_at: Optional[int] = None


@dataclass(frozen=True)
class FormulaWeight:
    """Squared weight of a shifted alternating loop at an irrational q.

    Represents 1/|1 + c*q*(c + (-1)**n)|, which is irrational for algebraic
    q and therefore kept in formula form with a float approximation.
    """

    n: int
    c: int
    approx: float

    def value_at(self, q: RationalLike) -> Fraction:
        return lemma_weight_squared(self.n, self.c, q)

    def bounds(self, q_lo: RationalLike, q_hi: RationalLike) -> tuple[Fraction, Fraction]:
        """Exact enclosure of the squared weight for q in [q_lo, q_hi]."""
        a = self.value_at(q_lo)
        b = self.value_at(q_hi)
        return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class LoopWitness:
    """A certificate that some q is forbidden (or a candidate for one).

    For provenance "search", "pell" and "darboux" the certificate is a loop
    with non-unit squared weight; ``verified`` is True once the loop status
    and the weight have been re-checked from scratch (exactly for rational
    q, to interval tolerances for algebraic q).  Loops of unit weight keep
    ``verified = False``: they are valid loops but certify nothing.

    Provenance "duplicate-c" certifies instead by exhibiting two paths with
    equal final value and different weights; the second path and its weight
    live in ``other_loop`` / ``other_weight_squared`` and the shared value
    in ``c_value``.
    """

    q: Union[Fraction, AlgebraicNumber]
    loop: tuple[int, ...]
    weight_squared: Union[Fraction, FormulaWeight]
    provenance: str
    verified: bool
    other_loop: Optional[tuple[int, ...]] = None
    other_weight_squared: Optional[Fraction] = None
    c_value: Optional[Fraction] = None


@dataclass
class SearchConfig:
    """Bounds and switches for :func:`search_nonunit_loop`."""

    max_depth: int = 5
    window: int = 4
    node_budget: int = 200_000
    use_chain_pruning: bool = True

    def __post_init__(self):
        if self.max_depth < 1 or self.window < 1 or self.node_budget < 1:
            raise ValueError("max_depth, window and node_budget must be >= 1")


@dataclass
class SearchResult:
    witness: Optional[LoopWitness]
    nodes: int
    budget_exhausted: bool


def evaluate_path(q: RationalLike, m: Sequence[int]) -> PathEval:
    """Exact prefix values and path/loop/broken classification of ``m`` at q."""
    q = Fraction(q)
    if q <= 0:
        raise NonPositiveQ(f"q must be positive, got {q}")
    m = tuple(int(x) for x in m)
    if not m:
        raise ValueError("sequence must be non-empty")
    c = Fraction(m[0])
    prefix = [c]
    for j in range(1, len(m)):
        if c == 0:
            return PathEval(tuple(prefix), STATUS_BROKEN, broken_at=j)
        c = m[j] + 1 / (q * c)
        prefix.append(c)
    status = STATUS_LOOP if c == 0 else STATUS_PATH
    return PathEval(tuple(prefix), status)


def weight_squared(q: RationalLike, m: Sequence[int]) -> Fraction:
    """Exact squared weight q**k * prod_{j<k} c_j**2 of a path or loop."""
    q = Fraction(q)
    ev = evaluate_path(q, m)
    if ev.status == STATUS_BROKEN:
        raise BrokenPath(f"{tuple(m)} is not a path at q={q}")
    w2 = q ** (len(m) - 1)
    for c in ev.prefix_c[:-1]:
        w2 *= c * c
    return w2


def closed_form_c5(q: RationalLike, m: Sequence[int]) -> Fraction:
    """Closed-form final value of a length-5 sequence with m_0..m_3 non-zero.

    With q = a/b in lowest terms,

        c = m_4 + ((m_0 + m_2) b**2 + m_0 m_1 m_2 a b)
                / (b**2 + (m_0 m_1 + m_0 m_3 + m_2 m_3) a b + m_0 m_1 m_2 m_3 a**2).

    Both displayed polynomials are homogeneous of degree two in (a, b), so
    the value depends on q only.
    """
    q = Fraction(q)
    if q <= 0:
        raise NonPositiveQ(f"q must be positive, got {q}")
    m = tuple(int(x) for x in m)
    if len(m) != 5:
        raise ValueError("closed form is specific to length-5 sequences")
    m0, m1, m2, m3, m4 = m
    if 0 in (m0, m1, m2, m3):
        raise ValueError("m_0..m_3 must be non-zero")
    a, b = q.numerator, q.denominator
    den = b * b + (m0 * m1 + m0 * m3 + m2 * m3) * a * b + m0 * m1 * m2 * m3 * a * a
    if den == 0:
        raise ZeroDenominator(f"closed-form denominator vanishes at q={q}")
    num = (m0 + m2) * b * b + m0 * m1 * m2 * a * b
    return m4 + Fraction(num, den)


def lemma_weight_squared(n: int, c: int, q: RationalLike) -> Fraction:
    """Squared weight 1/|1 + c q (c + (-1)**n)| of a shifted alternating loop.

    Applies to loops (1, -1, ..., (-1)**(n-1), (-1)**n + c).  The shifts
    c = 0 and c = (-1)**(n+1) are refused: those loops always have unit
    weight.  For every other integer shift c*(c + (-1)**n) >= 2, so the
    value is < 1 whenever the sequence is a loop at q.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    q = Fraction(q)
    if q <= 0:
        raise NonPositiveQ(f"q must be positive, got {q}")
    sign = (-1) ** n
    c = int(c)
    if c == 0 or c == -sign:
        raise DegenerateC(f"shift c={c} is a unit-weight case for n={n}")
    return 1 / abs(1 + c * q * (c + sign))


def shifted_alternating_loop(n: int, c: int) -> tuple[int, ...]:
    """The sequence (1, -1, ..., (-1)**(n-1), (-1)**n + c)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return tuple((-1) ** i for i in range(n)) + ((-1) ** n + int(c),)


def chain_length(q: RationalLike) -> int:
    """Largest n with x_n >= 1/q for x_1 = 1, x_{j+1} = 1 - 1/(q x_j).

    Exact rational iteration; defined for 0 < q < 4, where the map has no
    positive fixed point and the sequence reaches 0 in finitely many steps.
    Non-zero proper loops at q in (2, 4) must carry this many consecutive
    alternating +-1 entries.
    """
    q = Fraction(q)
    if q <= 0 or q >= 4:
        raise OutOfRange(f"chain length is defined for 0 < q < 4, got {q}")
    inv = 1 / q
    x = Fraction(1)
    if x < inv:
        return 0
    n = 1
    while True:
        x = 1 - 1 / (q * x)
        if x < inv:
            return n
        n += 1


def brute_enumerate_loops(
    q: RationalLike, max_depth: int, coeff_bound: int
) -> list[LoopWitness]:
    """Every proper loop with length <= max_depth + 1 and |m_j| <= coeff_bound.

    Proper means all entries non-zero, plus the single zero loop (0).  Only
    sequences starting positive are walked; the rest follow by negating every
    entry, which negates all prefix values and preserves the weight.
    Exhaustive within bounds, so guarded hard: max_depth <= 8,
    coeff_bound <= 6.
    """
    q = Fraction(q)
    if q <= 0:
        raise NonPositiveQ(f"q must be positive, got {q}")
    if not 0 <= max_depth <= 8 or not 0 <= coeff_bound <= 6:
        raise BudgetExceeded(
            f"bounds (max_depth={max_depth}, coeff_bound={coeff_bound}) exceed "
            "the guard (8, 6)"
        )
    qn, qd = q.numerator, q.denominator
    max_len = max_depth + 1
    entries = [e for e in range(-coeff_bound, coeff_bound + 1) if e != 0]
    hits: list[tuple[tuple[int, ...], Fraction]] = [((0,), Fraction(1))]
    path: list[int] = []

    def dfs(cn: int, cd: int, pn: int, pd: int) -> None:
        # c = cn/cd is the last prefix value (non-zero), p = pn/pd the
        # product of all prefix values so far, c included
        length = len(path)
        a = qn * cn
        b = qd * cd
        extend = length + 1 < max_len
        for mj in entries:
            num = mj * a + b
            if num == 0:
                w2 = Fraction((qn**length) * pn * pn, (qd**length) * pd * pd)
                hits.append((tuple(path) + (mj,), w2))
            elif extend:
                path.append(mj)
                dfs(num, a, pn * num, pd * a)
                path.pop()

    for m0 in range(1, coeff_bound + 1):
        path[:] = [m0]
        dfs(m0, 1, m0, 1)
    path[:] = []

    out: list[tuple[tuple[int, ...], Fraction]] = []
    for loop, w2 in hits:
        out.append((loop, w2))
        if loop != (0,):
            out.append((tuple(-x for x in loop), w2))
    out.sort(key=lambda t: (len(t[0]), t[0]))

    witnesses = []
    for loop, w2 in out:
        verified = w2 != 1
        if verified:
            ev = evaluate_path(q, loop)
            verified = ev.status == STATUS_LOOP and weight_squared(q, loop) == w2
        witnesses.append(
            LoopWitness(q=q, loop=loop, weight_squared=w2, provenance="search",
                        verified=verified)
        )
    return witnesses


def check_chain_proposition(q: RationalLike, witnesses: Sequence[LoopWitness]) -> bool:
    """Check the alternating-chain necessary condition on a batch of loops.

    For each non-zero proper loop m = (m_0..m_k) at q in (2, 4), with l the
    smallest index such that |c_j| <= 1 for all l <= j <= k, require
    k >= l + C(q) and m_j = (-1)**j * eps on l <= j <= l + C(q) - 1 for some
    eps = +-1.  The zero loop (0) is outside the hypothesis and skipped.
    Inputs that are not proper loops at q are rejected.
    """
    q = Fraction(q)
    if not 2 < q < 4:
        raise OutOfRange(f"chain condition applies for 2 < q < 4, got {q}")
    cq = chain_length(q)
    for w in witnesses:
        loop = w.loop
        if loop == (0,):
            continue
        if 0 in loop:
            raise ValueError(f"{loop} is not a proper loop")
        ev = evaluate_path(q, loop)
        if ev.status != STATUS_LOOP:
            raise ValueError(f"{loop} is not a loop at q={q}")
        k = len(loop) - 1
        last_violation = -1
        for j, c in enumerate(ev.prefix_c):
            if abs(c) > 1:
                last_violation = j
        ell = last_violation + 1
        if k < ell + cq:
            return False
        eps = loop[ell]
        if abs(eps) != 1:
            return False
        for j in range(ell, ell + cq):
            if loop[j] != eps * (-1) ** (j - ell):
                return False
    return True


class _BudgetHit(Exception):
    pass


def _verified_loop_witness(
    q: Fraction, loop: tuple[int, ...], w2: Fraction, provenance: str
) -> LoopWitness:
    ev = evaluate_path(q, loop)
    ok = ev.status == STATUS_LOOP and weight_squared(q, loop) == w2 and w2 != 1
    return LoopWitness(q=q, loop=loop, weight_squared=w2, provenance=provenance,
                       verified=ok)


def _verified_duplicate_witness(
    q: Fraction,
    first: tuple[int, ...],
    w2_first: Fraction,
    second: tuple[int, ...],
    w2_second: Fraction,
    c_value: Fraction,
) -> LoopWitness:
    ev1 = evaluate_path(q, first)
    ev2 = evaluate_path(q, second)
    ok = (
        ev1.status == STATUS_PATH
        and ev2.status == STATUS_PATH
        and ev1.prefix_c[-1] == ev2.prefix_c[-1] == c_value
        and weight_squared(q, first) == w2_first
        and weight_squared(q, second) == w2_second
        and w2_first != w2_second
    )
    return LoopWitness(
        q=q,
        loop=first,
        weight_squared=w2_first,
        provenance="duplicate-c",
        verified=ok,
        other_loop=second,
        other_weight_squared=w2_second,
        c_value=c_value,
    )


def search_nonunit_loop(q: RationalLike, cfg: Optional[SearchConfig] = None) -> SearchResult:
    """Bounded depth-first search for a certificate that q is forbidden.

    Nodes are exact prefix values c; edges append an integer m taken from a
    window of half-width ``cfg.window`` around round(-1/(q c)), the choice
    that steers the next value toward zero.  Two certificates can surface:

    * a loop (final value 0) with squared weight != 1, provenance "search";
    * two paths meeting at one c-value with different squared weights,
      provenance "duplicate-c" (unit weight on all loops would force the
      weight to be a function of the final value, so this also certifies).

    First entries are searched positive only; negating a sequence preserves
    weights.  For 2 < q < 4 with ``use_chain_pruning`` the walk is restricted
    to non-zero entries and branches too shallow to fit the required
    alternating chain of length chain_length(q) are cut; this is sound for
    proper loops, which the alternating-chain condition covers.  The window
    heuristic is incomplete either way: an empty result is not a proof that
    every loop at q has unit weight.  Every surfaced witness is re-verified
    from scratch before being returned.
    """
    q = Fraction(q)
    if q <= 0:
        raise NonPositiveQ(f"q must be positive, got {q}")
    if cfg is None:
        cfg = SearchConfig()
    qn, qd = q.numerator, q.denominator
    prune = cfg.use_chain_pruning and 2 < q < 4
    cq = chain_length(q) if prune else 0
    max_len = cfg.max_depth
    max_k = max_len - 1

    offsets = [0]
    for d in range(1, cfg.window + 1):
        offsets.append(-d)
        offsets.append(d)

    memo: dict[tuple[int, int, int, int], int] = {}
    by_c: dict[tuple[int, int], tuple[int, int, tuple[int, ...]]] = {}
    found: list[LoopWitness] = []
    state = {"nodes": 0}
    path: list[int] = []

    def visit(cn: int, cd: int, wn: int, wd: int, last_violation: int) -> None:
        length = len(path)
        if prune and last_violation + 1 + cq > max_k:
            return
        key = (cn, cd, wn, wd)
        seen = memo.get(key)
        if seen is not None and seen <= length:
            return
        memo[key] = length
        ckey = (cn, cd)
        prev = by_c.get(ckey)
        if prev is None:
            by_c[ckey] = (wn, wd, tuple(path))
        elif (prev[0], prev[1]) != (wn, wd):
            found.append(
                _verified_duplicate_witness(
                    q, prev[2], Fraction(prev[0], prev[1]),
                    tuple(path), Fraction(wn, wd), Fraction(cn, cd),
                )
            )
            return
        if length >= max_len:
            return
        center = round(Fraction(-qd * cd, qn * cn))
        a = qn * cn
        b = qd * cd
        wn2 = wn * qn * cn * cn
        wd2 = wd * qd * cd * cd
        g2 = math.gcd(wn2, wd2)
        wn2 //= g2
        wd2 //= g2
        for off in offsets:
            mj = center + off
            if mj == 0 and prune:
                continue
            state["nodes"] += 1
            if state["nodes"] > cfg.node_budget:
                raise _BudgetHit
            num = mj * a + b
            if num == 0:
                w2loop = Fraction(wn2, wd2)
                if w2loop != 1:
                    found.append(
                        _verified_loop_witness(q, tuple(path) + (mj,), w2loop, "search")
                    )
                    return
            else:
                g = math.gcd(num, a)
                n2, d2 = num // g, a // g
                if d2 < 0:
                    n2, d2 = -n2, -d2
                viol = length if abs(n2) > d2 else last_violation
                path.append(mj)
                visit(n2, d2, wn2, wd2, viol)
                path.pop()
                if found:
                    return

    exhausted = False
    try:
        for m0 in range(1, cfg.window + 1):
            state["nodes"] += 1
            if state["nodes"] > cfg.node_budget:
                raise _BudgetHit
            path[:] = [m0]
            visit(m0, 1, 1, 1, 0 if m0 > 1 else -1)
            if found:
                break
    except _BudgetHit:
        exhausted = True
    path[:] = []

    witness = found[0] if found else None
    if witness is not None and not witness.verified:
        raise ArithmeticError(f"internal verification failure for {witness.loop} at q={q}")
    return SearchResult(witness=witness, nodes=state["nodes"], budget_exhausted=exhausted)


def verify_witness(
    w: LoopWitness,
    alg_width: Fraction = ALG_INTERVAL_WIDTH,
    final_c_tol: Fraction = ALG_FINAL_C_TOL,
) -> bool:
    """Re-verify a witness from scratch.

    Rational q: the loop must evaluate to status loop with exactly the stored
    squared weight, different from 1 (duplicate-c pairs re-check their two
    paths instead).  Algebraic q: the isolating interval is refined to width
    <= ``alg_width``, the final prefix value at the interval midpoint must be
    below ``final_c_tol`` in absolute value, and the exact weight enclosure
    over the interval must exclude 1.
    """
    if w.provenance == "duplicate-c":
        if not isinstance(w.q, Fraction):
            return False
        if w.other_loop is None or w.other_weight_squared is None or w.c_value is None:
            return False
        try:
            ev1 = evaluate_path(w.q, w.loop)
            ev2 = evaluate_path(w.q, w.other_loop)
        except ValueError:
            return False
        return (
            ev1.status == STATUS_PATH
            and ev2.status == STATUS_PATH
            and ev1.prefix_c[-1] == ev2.prefix_c[-1] == w.c_value
            and weight_squared(w.q, w.loop) == w.weight_squared
            and weight_squared(w.q, w.other_loop) == w.other_weight_squared
            and w.weight_squared != w.other_weight_squared
        )

    if isinstance(w.q, Fraction):
        if not isinstance(w.weight_squared, Fraction):
            return False
        try:
            ev = evaluate_path(w.q, w.loop)
        except ValueError:
            return False
        return (
            ev.status == STATUS_LOOP
            and weight_squared(w.q, w.loop) == w.weight_squared
            and w.weight_squared != 1
        )

    if not isinstance(w.weight_squared, FormulaWeight):
        return False
    fw = w.weight_squared
    n = len(w.loop) - 1
    sign = (-1) ** n
    if fw.n != n or w.loop[:-1] != tuple((-1) ** i for i in range(n)):
        return False
    if w.loop[-1] != sign + fw.c:
        return False
    alg = w.q.refine(alg_width)
    mid = (alg.lo + alg.hi) / 2
    try:
        ev = evaluate_path(mid, w.loop)
    except ValueError:
        return False
    if ev.status == STATUS_BROKEN:
        return False
    if abs(ev.prefix_c[-1]) >= final_c_tol:
        return False
    try:
        lo_b, hi_b = fw.bounds(alg.lo, alg.hi)
    except (DegenerateC, NonPositiveQ):
        return False
    if lo_b <= 1 <= hi_b:
        return False
    return abs(Fraction(fw.approx) - fw.value_at(mid)) < Fraction(1, 10**9)
