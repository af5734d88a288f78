"""Command-line front end: problem files in, report documents out.

Reports are JSON on standard output, byte-identical across repeated
runs on the same input (all orderings are deterministic).  Exit codes:
0 success, 2 input error, 3 mathematical failure (limit situation,
branching, unsupported factorization, unresolved branches), 4 precision
exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fixtures
from .basefield import field_from_descriptor, residue_factorize
from .errors import (
    Branched,
    InputError,
    LimitSituation,
    MLVError,
    NoRoot,
    PrecisionExhausted,
    UnsupportedFactorization,
)
from .indval import augment, depth_zero
from .mlv import (
    chain_invariants,
    chain_report,
    compute_mlv_chain,
    depth_one_certificate,
    factor_certificate,
    generator_search,
)
from .okutsu import (
    ChainOracle,
    SeriesOracle,
    build_sequence,
    okutsu_depth_and_kinds,
    oracle_distance,
    verify_okutsu_sequence,
)
from .ordgroup import parse_value
from .poly import parse_poly, render_poly
from .residual import is_key_polynomial, residual_polynomial

TASKS = (
    "eval",
    "residual",
    "iskey",
    "chain",
    "branches",
    "depth",
    "cert-depth-one",
    "search-generators",
    "okutsu-verify",
    "series-value",
)


def _chain_from_doc(K, doc):
    steps = doc.get("steps")
    if not steps:
        raise InputError("chain document needs steps")
    first = steps[0]
    phi0 = parse_poly(K, first["phi"])
    if phi0.degree() != 1 or not phi0.is_monic():
        raise InputError("the first chain step needs a monic degree-one key")
    gamma0 = parse_value(str(first["gamma"]), K.rank)
    mu = depth_zero(K, K.arith.neg(phi0[0]), gamma0)
    for step in steps[1:]:
        phi = parse_poly(K, step["phi"])
        gamma = parse_value(str(step["gamma"]), K.rank)
        mu = augment(mu, phi, gamma)
    return mu


def _oracle_from_doc(doc, t_pr, p_pr, max_refinements):
    kind = doc.get("kind")
    if kind == "series":
        return SeriesOracle(int(doc["p"]), t_pr, p_pr)
    if kind == "chain":
        K = field_from_descriptor(doc["field"])
        g = parse_poly(K, doc["poly"])
        chain = compute_mlv_chain(K, g, max_refinements=max_refinements)
        return ChainOracle(chain)
    raise InputError(f"unknown oracle kind {kind!r}")


def _run_task(task, doc, args):
    if task == "eval":
        K = field_from_descriptor(doc["field"])
        mu = _chain_from_doc(K, doc["chain"])
        f = parse_poly(K, doc["poly"])
        value = mu.evaluate(f)
        return {
            "value": value.render(),
            "chain": [
                {"phi": render_poly(K, p), "gamma": g.render()}
                for p, g in mu.raw_steps()
            ],
        }
    if task == "residual":
        K = field_from_descriptor(doc["field"])
        mu = _chain_from_doc(K, doc["chain"])
        f = parse_poly(K, doc["poly"])
        R = residual_polynomial(mu, f)
        out = {
            "residual": R.describe(),
            "u": render_poly(K, mu.u_top),
            "e": mu.e_top,
        }
        try:
            _, facs = residue_factorize(mu.residue_field, R.upoly)
            out["factors"] = [[h.render(var="y"), m] for h, m in facs]
        except UnsupportedFactorization as exc:
            out["factors_error"] = str(exc)
        return out
    if task == "iskey":
        K = field_from_descriptor(doc["field"])
        mu = _chain_from_doc(K, doc["chain"])
        f = parse_poly(K, doc["poly"])
        ok, cert = is_key_polynomial(mu, f)
        return {"is_key": ok, "certificate": cert}
    if task == "chain":
        K = field_from_descriptor(doc["field"])
        g = parse_poly(K, doc["poly"])
        policy = "error" if args.strict_branches else "follow"
        chain = compute_mlv_chain(
            K, g, max_refinements=args.max_refinements, branch_policy=policy
        )
        return chain_report(K, chain)
    if task == "branches":
        K = field_from_descriptor(doc["field"])
        g = parse_poly(K, doc["poly"])
        records = factor_certificate(K, g, max_refinements=args.max_refinements)
        unresolved = [r for r in records if not r.resolved]
        out = {
            "branches": [
                {
                    "label": list(r.label),
                    "resolved": r.resolved,
                    "e": r.e,
                    "f": r.f,
                    "degree": r.degree,
                    "reason": r.reason,
                    "chain": [list(s) for s in r.chain_steps],
                }
                for r in records
            ],
            "all_resolved": not unresolved,
        }
        if not unresolved:
            out["degree_sum"] = sum(r.degree for r in records)
        return out
    if task == "depth":
        K = field_from_descriptor(doc["field"])
        g = parse_poly(K, doc["poly"])
        policy = "error" if args.strict_branches else "follow"
        chain = compute_mlv_chain(
            K, g, max_refinements=args.max_refinements, branch_policy=policy
        )
        inv = chain_invariants(chain)
        return {"depth": chain.depth, "e": inv.e, "f": inv.f}
    if task == "cert-depth-one":
        K = field_from_descriptor(doc["field"])
        g = parse_poly(K, doc["poly"])
        chain = compute_mlv_chain(K, g, max_refinements=args.max_refinements)
        alpha = parse_poly(K, doc["alpha"])
        return depth_one_certificate(chain, alpha)
    if task == "search-generators":
        K = field_from_descriptor(doc["field"])
        g = parse_poly(K, doc["poly"])
        lo, hi = doc.get("box", [-2, 2])
        budget = int(doc.get("budget", args.budget))
        stop = doc.get("stop_at_depth")
        rs = tuple(doc["rs"]) if "rs" in doc else None
        res = generator_search(
            K,
            g,
            box=range(int(lo), int(hi) + 1),
            budget=budget,
            stop_at_depth=None if stop is None else int(stop),
            max_refinements=args.max_refinements,
            parallel=args.parallel,
            rs_bounds=rs,
        )
        return {
            "min_depth": res.min_depth,
            "witness": list(res.witness) if res.witness else None,
            "witness_minpoly": res.witness_minpoly,
            "scanned": res.scanned,
            "full_degree_generators": res.full_degree,
            "exhausted_budget": res.exhausted_budget,
            "depth_histogram": _histogram(res.table),
            "notes": res.notes,
        }
    if task == "okutsu-verify":
        oracle = _oracle_from_doc(doc["oracle"], args.t_pr, args.p_pr, args.max_refinements)
        seq = build_sequence(oracle, doc["families"])
        report = verify_okutsu_sequence(oracle, seq, doc.get("challengers", ()))
        r, kinds = okutsu_depth_and_kinds(seq)
        report["depth"] = r
        report["step_kinds"] = kinds
        return report
    if task == "series-value":
        oracle = SeriesOracle(int(doc["p"]), args.t_pr, args.p_pr)
        elements = doc.get("elements") or [doc["element"]]
        out = []
        for e in elements:
            d = oracle_distance(oracle, e)
            out.append({"element": e, "distance": d.render()})
        return {"p": oracle.p, "t_precision": oracle.T, "p_precision": oracle.P, "values": out}
    raise InputError(f"unknown task {task!r}")


def _histogram(table):
    hist: dict = {}
    for row in table:
        hist[row["depth"]] = hist.get(row["depth"], 0) + 1
    return {str(k): hist[k] for k in sorted(hist)}


def _summary(task, result):
    if task in ("chain", "depth"):
        return f"depth {result.get('depth')} e {result.get('e')} f {result.get('f')}"
    if task == "branches":
        n = len(result["branches"])
        return f"{n} branch(es), all_resolved={result['all_resolved']}"
    if task == "cert-depth-one":
        return "depth-one witness" if result.get("ok") else f"fails: {result.get('failure')}"
    if task == "search-generators":
        return f"min depth {result.get('min_depth')} over {result.get('full_degree_generators')} generators"
    if task == "okutsu-verify":
        return f"ok={result.get('ok')} depth={result.get('depth')} kinds={result.get('step_kinds')}"
    return "ok"


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mlvchains",
        description="Exact MacLane-Vaquie chains, residual polynomials and Okutsu verification.",
    )
    sub = ap.add_subparsers(dest="task", required=True)
    for task in TASKS:
        sp = sub.add_parser(task)
        sp.add_argument("--input", help="problem file (JSON)")
        sp.add_argument(
            "--fixture", choices=("sec32", "sec34", "sec4"), help="run a bundled example"
        )
        sp.add_argument("--pretty", action="store_true", help="indent the report")
        sp.add_argument("--max-refinements", type=int, default=25)
        sp.add_argument("--t-pr", type=int, default=16, help="series t-precision")
        sp.add_argument("--p-pr", type=int, default=16, help="series p-adic precision")
        sp.add_argument("--budget", type=int, default=100000, help="search budget")
        sp.add_argument("--parallel", type=int, default=1, help="search workers")
        sp.add_argument(
            "--strict-branches",
            action="store_true",
            help="raise Branched instead of following the first component",
        )
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    task = args.task
    try:
        if args.fixture:
            doc = fixtures.fixture_payload(args.fixture, task)
        elif args.input:
            with open(args.input, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        else:
            doc = json.load(sys.stdin)
    except (OSError, json.JSONDecodeError, InputError) as exc:
        _emit({"task": task, "status": "error", "error": _err(exc)}, args)
        return 2
    try:
        result = _run_task(task, doc, args)
    except (InputError, KeyError, TypeError, ValueError) as exc:
        _emit({"task": task, "status": "error", "error": _err(exc)}, args)
        return 2
    except PrecisionExhausted as exc:
        err = _err(exc)
        if exc.needed is not None:
            err["needed_precision"] = exc.needed
        _emit({"task": task, "status": "error", "error": err}, args)
        return 4
    except LimitSituation as exc:
        err = _err(exc)
        err["refinements"] = exc.refinements
        _emit({"task": task, "status": "error", "error": err, "trace": exc.trace}, args)
        return 3
    except Branched as exc:
        err = _err(exc)
        err["factors"] = exc.factors
        _emit({"task": task, "status": "error", "error": err}, args)
        return 3
    except (UnsupportedFactorization, NoRoot, MLVError) as exc:
        _emit({"task": task, "status": "error", "error": _err(exc)}, args)
        return 3
    report = {
        "task": task,
        "status": "ok",
        "summary": _summary(task, result),
        "result": result,
    }
    _emit(report, args)
    return 0


def _err(exc):
    return {"kind": type(exc).__name__, "detail": str(exc)}


def _emit(report, args):
    if args.pretty:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(json.dumps(report, sort_keys=True))


if __name__ == "__main__":
    sys.exit(main())
