"""Command-line front end: evaluate sequences, search, scan ranges, and emit
machine-readable certificates.

Exit codes: 0 success (including "nothing found"), 1 invalid input,
2 internal budget or overflow fault.  Rationals are accepted as "a/b" or as
finite decimals, both converted exactly.  All big integers in JSON output are
rendered as decimal strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Union

from .exact import AlgebraicNumber, IntPoly
from . import continuants, families, loops

WEIGHT_FORMULA = "1/|1+c q (c+(-1)^n)|"


def parse_rational(text: str) -> Fraction:
    """Parse "a/b" or a finite decimal, exactly."""
    return Fraction(text.strip())


def parse_sequence(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def q_to_dict(q: Union[Fraction, AlgebraicNumber]) -> dict:
    if isinstance(q, Fraction):
        return {"type": "rational", "num": str(q.numerator), "den": str(q.denominator)}
    return {
        "type": "algebraic",
        "poly": [str(c) for c in q.defining.coeffs],
        "interval": [frac_str(q.lo), frac_str(q.hi)],
        "approx": q.approx,
    }


def q_from_dict(d: dict) -> Union[Fraction, AlgebraicNumber]:
    if d["type"] == "rational":
        return Fraction(int(d["num"]), int(d["den"]))
    poly = IntPoly([int(c) for c in d["poly"]])
    lo, hi = Fraction(d["interval"][0]), Fraction(d["interval"][1])
    return AlgebraicNumber(poly, lo, hi, float(d["approx"]))


def w2_to_dict(w2: Union[Fraction, loops.FormulaWeight]) -> dict:
    if isinstance(w2, Fraction):
        return {"num": str(w2.numerator), "den": str(w2.denominator)}
    return {"formula": WEIGHT_FORMULA, "approx": w2.approx}


def witness_to_dict(w: loops.LoopWitness) -> dict:
    d = {
        "q": q_to_dict(w.q),
        "loop": list(w.loop),
        "weight_squared": w2_to_dict(w.weight_squared),
        "provenance": w.provenance,
        "verified": w.verified,
    }
    if w.provenance == "duplicate-c":
        d["other_loop"] = list(w.other_loop)
        d["other_weight_squared"] = w2_to_dict(w.other_weight_squared)
        d["c_value"] = frac_str(w.c_value)
    return d


def witness_from_dict(d: dict) -> loops.LoopWitness:
    q = q_from_dict(d["q"])
    loop = tuple(int(x) for x in d["loop"])
    wd = d["weight_squared"]
    w2: Union[Fraction, loops.FormulaWeight]
    if "formula" in wd:
        n = len(loop) - 1
        w2 = loops.FormulaWeight(n=n, c=loop[-1] - (-1) ** n, approx=float(wd["approx"]))
    else:
        w2 = Fraction(int(wd["num"]), int(wd["den"]))
    kwargs = {}
    if d["provenance"] == "duplicate-c":
        kwargs = {
            "other_loop": tuple(int(x) for x in d["other_loop"]),
            "other_weight_squared": Fraction(
                int(d["other_weight_squared"]["num"]),
                int(d["other_weight_squared"]["den"]),
            ),
            "c_value": Fraction(d["c_value"]),
        }
    return loops.LoopWitness(
        q=q,
        loop=loop,
        weight_squared=w2,
        provenance=d["provenance"],
        verified=bool(d["verified"]),
        **kwargs,
    )


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_eval(args) -> int:
    q = parse_rational(args.q)
    m = parse_sequence(args.m)
    ev = loops.evaluate_path(q, m)
    print("prefix_c=" + ",".join(frac_str(c) for c in ev.prefix_c))
    if ev.status == loops.STATUS_BROKEN:
        print(f"status=broken_at:{ev.broken_at}")
    else:
        print(f"status={ev.status}")
        print(f"w2={frac_str(loops.weight_squared(q, m))}")
    return 0


def _search_config(args) -> loops.SearchConfig:
    return loops.SearchConfig(
        max_depth=args.depth, window=args.window, node_budget=args.budget
    )


def cmd_search(args) -> int:
    q = parse_rational(args.q)
    res = loops.search_nonunit_loop(q, _search_config(args))
    if res.witness is not None:
        _emit({"found": True, "nodes": res.nodes, "witness": witness_to_dict(res.witness)})
    else:
        _emit({"found": False, "budget_exhausted": res.budget_exhausted, "nodes": res.nodes})
    return 0


def reduced_fractions(lo: Fraction, hi: Fraction, max_den: int) -> list[tuple[int, int]]:
    """Reduced fractions a/b in [lo, hi] with b <= max_den, sorted by (b, a)."""
    out = []
    for b in range(1, max_den + 1):
        for a in range(max(1, math.ceil(lo * b)), math.floor(hi * b) + 1):
            if math.gcd(a, b) == 1:
                out.append((a, b))
    out.sort(key=lambda ab: (ab[1], ab[0]))
    return out


def _scan_candidate(task):
    a, b, depth, window, budget = task
    res = loops.search_nonunit_loop(
        Fraction(a, b),
        loops.SearchConfig(max_depth=depth, window=window, node_budget=budget),
    )
    return a, b, res


def cmd_scan(args) -> int:
    lo, hi = (parse_rational(t) for t in args.range.split(","))
    if not 0 < lo < hi:
        raise ValueError(f"bad range [{lo}, {hi}]: need 0 < lo < hi")
    cands = reduced_fractions(lo, hi, args.max_den)
    tasks = [(a, b, args.depth, args.window, args.budget) for a, b in cands]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_scan_candidate, tasks, chunksize=8))
    else:
        results = [_scan_candidate(t) for t in tasks]
    results.sort(key=lambda r: (r[1], r[0]))

    if args.json:
        report = {
            "interval": [frac_str(lo), frac_str(hi)],
            "max_denominator": args.max_den,
            "config": {
                "max_depth": args.depth,
                "window": args.window,
                "node_budget": args.budget,
                "use_chain_pruning": True,
            },
            "found": [
                witness_to_dict(res.witness) for _, _, res in results if res.witness
            ],
            "examined": len(results),
            "budget_exhausted": [
                frac_str(Fraction(a, b)) for a, b, res in results if res.budget_exhausted
            ],
        }
        _emit(report)
        return 0

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["a", "b", "q_float", "found", "loop", "w2_num", "w2_den", "nodes",
         "budget_exhausted"]
    )
    for a, b, res in results:
        w = res.witness
        if w is not None and isinstance(w.weight_squared, Fraction):
            loop_s = ";".join(str(x) for x in w.loop)
            w2n, w2d = str(w.weight_squared.numerator), str(w.weight_squared.denominator)
        else:
            loop_s, w2n, w2d = "", "", ""
        writer.writerow(
            [a, b, repr(a / b), "true" if w is not None else "false", loop_s,
             w2n, w2d, res.nodes, "true" if res.budget_exhausted else "false"]
        )
    sys.stdout.write(buf.getvalue())
    return 0


def cmd_pell(args) -> int:
    out = []
    for pw in families.pell_witnesses(args.count, reciprocal=args.reciprocal):
        out.append(
            {
                "k": pw.k,
                "a": str(pw.a),
                "b": str(pw.b),
                "q": q_to_dict(pw.q),
                "witness": witness_to_dict(pw.witness),
            }
        )
    _emit(out)
    return 0


def cmd_darboux(args) -> int:
    out = []
    for dw in families.darboux_witnesses(args.n, args.u_index, args.count):
        out.append(
            {
                "n": dw.n,
                "c_k": dw.c_k,
                "epsilon": dw.epsilon,
                "t0": q_to_dict(dw.t0),
                "t1_approx": dw.t1_approx,
                "q": q_to_dict(dw.q),
                "witness": witness_to_dict(dw.witness),
            }
        )
    _emit(out)
    return 0


def cmd_chain(args) -> int:
    print(loops.chain_length(parse_rational(args.q)))
    return 0


def cmd_gpoly(args) -> int:
    print(json.dumps(list(continuants.g_poly(args.n).coeffs)))
    return 0


def cmd_roots(args) -> int:
    print(json.dumps(continuants.g_roots(args.n)))
    return 0


def cmd_uset(args) -> int:
    _emit([q_to_dict(a) for a in continuants.u_set(args.n)])
    return 0


def cmd_cos2(args) -> int:
    print(json.dumps(families.cos2_family(args.max_k, args.max_n)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="forbiddenq",
        description="Exact continued-fraction loop weights and certified "
                    "forbidden conductor values.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate a sequence at q")
    sp.add_argument("--q", required=True)
    sp.add_argument("--m", required=True, help="comma-separated integers")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("search", help="search for a non-unit-weight loop at q")
    sp.add_argument("--q", required=True)
    sp.add_argument("--depth", type=int, default=5)
    sp.add_argument("--window", type=int, default=4)
    sp.add_argument("--budget", type=int, default=200_000)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("scan", help="search every reduced fraction in a range")
    sp.add_argument("--range", required=True, help="lo,hi")
    sp.add_argument("--max-den", type=int, required=True, dest="max_den")
    sp.add_argument("--depth", type=int, default=5)
    sp.add_argument("--window", type=int, default=4)
    sp.add_argument("--budget", type=int, default=200_000)
    sp.add_argument("--jobs", type=int, default=1)
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("pell", help="witnesses from units of the norm form")
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--reciprocal", action="store_true")
    sp.set_defaults(func=cmd_pell)

    sp = sub.add_parser("darboux", help="witnesses above an accumulation point")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--u-index", type=int, default=0, dest="u_index")
    sp.add_argument("--count", type=int, required=True)
    sp.set_defaults(func=cmd_darboux)

    sp = sub.add_parser("chain", help="alternating-chain length bound at q")
    sp.add_argument("--q", required=True)
    sp.set_defaults(func=cmd_chain)

    sp = sub.add_parser("gpoly", help="coefficients of the alternating continuant")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_gpoly)

    sp = sub.add_parser("roots", help="roots 2cos(pi j/(n+1)) of the alternating continuant")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("uset", help="certified squared roots with coprime index")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_uset)

    sp = sub.add_parser("cos2", help="float enumeration of the classical dense family")
    sp.add_argument("--max-k", type=int, required=True, dest="max_k")
    sp.add_argument("--max-n", type=int, required=True, dest="max_n")
    sp.set_defaults(func=cmd_cos2)

    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (loops.BudgetExceeded, OverflowError) as e:
        print(f"fault: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
