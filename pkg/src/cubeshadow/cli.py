"""Command-line interface: ``cubeshadow <subcommand> ...``.

Exit codes: 0 success, 1 a check failed (or a search ran out of budget),
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal
from fractions import Fraction

from . import spart
from .bounds import (
    LOWER_BOUND_C2_ADVISORY,
    BoundReport,
    boolean_partition_upper_bound,
    conjecture_j_threshold,
    general_lower_bound,
    influence_projection_check,
    iterated_ceiling,
    meets_general_lower_bound,
    volume_projection_floor,
)
from .constructions import KINDS, PSI, ConstructionSpec, build, golden_ratio
from .core import CoordSet, GridCover, PartitionError, cover_to_partition
from .measure import evaluate, mpv
from .reports import (
    bound_reports_csv,
    decimal_str,
    eval_report_human,
    jsonable,
    rational_json,
    rho21_csv,
    table_csv,
)
from .search import DEFAULT_BUDGET, exhaustive_min_mpv
from .verify import SUITES, run_suite


class UsageError(Exception):
    pass


def _add_construction_flags(p, required_kind=False):
    p.add_argument("--kind", choices=KINDS, required=required_kind)
    p.add_argument("--n", type=int)
    p.add_argument("--grid", "--N", dest="grid", type=int, help="grid resolution N per axis")
    p.add_argument("--c", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    for prefix in ("base", "other"):
        p.add_argument(f"--{prefix}", choices=("majority", "tribes", "adjusted-tribes", "adjusted-majority"))
        p.add_argument(f"--{prefix}-n", type=int)
        p.add_argument(f"--{prefix}-w", type=int)
        p.add_argument(f"--{prefix}-s", type=int)
        p.add_argument(f"--{prefix}-file")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--kind {args.kind} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _factor(args, prefix):
    path = getattr(args, f"{prefix}_file")
    if path:
        return spart.read(path)
    kind = getattr(args, prefix)
    if kind is None:
        raise UsageError(f"--kind {args.kind} needs --{prefix} or --{prefix}-file")
    n, w, s = (getattr(args, f"{prefix}_{x}") for x in ("n", "w", "s"))
    if kind.endswith("majority"):
        if n is None:
            raise UsageError(f"--{prefix} {kind} needs --{prefix}-n")
        f = build(ConstructionSpec("majority", {"n": n}))
    else:
        if w is None or s is None:
            raise UsageError(f"--{prefix} {kind} needs --{prefix}-w and --{prefix}-s")
        f = build(ConstructionSpec("tribes", {"w": w, "s": s}))
    if kind.startswith("adjusted"):
        f = build(ConstructionSpec("adjusted", {"base": f}))
    return f


def construct_from_args(args):
    kind = args.kind
    params = {}
    if args.grid is not None:
        params["N"] = args.grid
    if kind in ("majority", "halfspace"):
        _need(args, "n")
        params["n"] = args.n
    elif kind == "tribes":
        _need(args, "w", "s")
        params.update(w=args.w, s=args.s)
    elif kind == "adjusted":
        params["base"] = _factor(args, "base")
    elif kind == "product":
        params.update(base=_factor(args, "base"), other=_factor(args, "other"))
    elif kind == "power":
        _need(args, "k")
        params.update(base=_factor(args, "base"), k=args.k)
    elif kind in ("level_set", "sauer_shelah_cover"):
        _need(args, "n", "c")
        params.update(n=args.n, c=args.c)
    elif kind == "hypercube":
        _need(args, "n", "r")
        params.update(n=args.n, r=args.r)
    elif kind == "golden_ratio":
        params.setdefault("N", 610)
    return build(ConstructionSpec(kind, params))


def _load_subject(args):
    if args.path:
        return spart.read(args.path)
    if args.kind:
        return construct_from_args(args)
    raise UsageError("give a SPART1 path or --kind")


def _emit(text: str, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out):
    _emit(json.dumps(jsonable(obj), indent=2) + "\n", out)


# ---------------------------------------------------------------- commands


def cmd_construct(args) -> int:
    obj = construct_from_args(args)
    if isinstance(obj, GridCover):
        obj = cover_to_partition(obj)
    data = spart.dumps(obj)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


def bound_checks(obj, d: int) -> list[dict]:
    """Every applicable exact bound check for a partition or cover at dimension ``d``."""
    checks = []
    value, _ = mpv(obj, d)
    checks.append({
        "name": "general_lower_bound",
        "bound": str(general_lower_bound(obj.n, d, obj.c).value),
        "measured": value,
        "holds": meets_general_lower_bound(value, obj.n, d, obj.c),
    })
    for alpha in range(1, obj.c + 1):
        K = obj.part_mask(alpha)
        floor = volume_projection_floor(K, d)
        checks.append({"name": "volume_projection_floor", "part": alpha, "volume": floor.volume,
                       "best": floor.best, "S": floor.witness, "holds": floor.holds})
    if d < obj.n and not isinstance(obj, GridCover):
        for S in CoordSet.all_of_size(obj.n, d):
            r = influence_projection_check(obj, S)
            checks.append({"name": "influence_projection", "S": S, "c_rho": r.c_rho,
                           "one_plus_gamma": r.one_plus_gamma, "holds": r.holds})
        if obj.N == 2 and d == obj.n - 1:
            r = boolean_partition_upper_bound(obj)
            checks.append({"name": "boolean_partition_upper_bound", "bound": r.value,
                           "measured": r.measured, "gamma": r.extra["gamma"], "eps": r.extra["eps"],
                           "holds": r.holds})
    return checks


def cmd_eval(args) -> int:
    obj = _load_subject(args)
    report = evaluate(obj, args.d, influence_k=args.influence)
    if args.kind == "golden_ratio" and not args.path:
        report.notes.append(
            f"claimed optimum for this construction: 1/phi ~ {PSI:.6f} (not asserted); measured mpv "
            f"{decimal_str(report.mpv, 4)}"
        )
    status = 0
    if args.check_bounds:
        report.checks = bound_checks(obj, args.d)
        if not all(c["holds"] for c in report.checks):
            status = 1
    if args.format == "json":
        _emit_json(report.to_json(), args.out)
    elif args.format == "csv":
        _emit(report.to_csv(), args.out)
    else:
        _emit(eval_report_human(report) + "\n", args.out)
    return status


def cmd_bounds(args) -> int:
    reports = []
    if args.n is not None and args.d is not None and args.c is not None:
        glb = general_lower_bound(args.n, args.d, args.c)
        reports.append(glb)
        reports.append(BoundReport("taylor_floor", glb.params, glb.extra["taylor_floor"]))
    if args.eps is not None:
        eps = Fraction(args.eps)
        n = args.n if args.n is not None else 2
        reports.append(BoundReport("kappa_d1_lower_bound", {"n": n, "eps": eps},
                                   Fraction(iterated_ceiling(1 / eps, n))))
    if args.b is not None:
        t = conjecture_j_threshold(Fraction(args.b), args.n or 1, Fraction(args.delta or 0), args.log_base)
        reports.append(BoundReport("conjecture_j_threshold",
                                   {"b": t.b, "n": t.n, "delta": t.delta, "log_base": t.log_base, "c": t.c},
                                   t.threshold_exact if t.threshold_exact is not None else t.threshold))
    if not reports:
        raise UsageError("bounds needs --n --d --c, --eps, or --b")
    advisory = None
    if args.c == 2 and args.n is not None and args.d == args.n - 1:
        advisory = LOWER_BOUND_C2_ADVISORY
    if args.format == "csv":
        _emit(bound_reports_csv(reports), args.out)
    else:
        doc = {"bounds": [{"name": r.name, "params": r.params, "value": r.value, **r.extra} for r in reports]}
        if advisory:
            doc["advisory"] = advisory
        _emit_json(doc, args.out)
    return 0


def search_json(result) -> dict:
    return {
        "geometry": {"n": result.n, "N": result.N, "c": result.c},
        "d": result.d,
        "method": result.method,
        "value": rational_json(result.value) if result.value is not None else None,
        "optimal": result.optimal,
        "nodes": result.nodes,
        "leaves": result.leaves,
        "bound_pruned": result.bound_pruned,
        "symmetry_pruned": result.symmetry_pruned,
        "group_order": result.group_order,
        "colorings": result.colorings,
        "budget": result.budget,
        "witness": (result.best.labels.reshape(-1).tolist() if result.best is not None
                    and not isinstance(result.best, GridCover) else None),
        "note": "grid optimum over colorings of the N^n grid; an upper bound for the continuous cube only",
    }


def cmd_search(args) -> int:
    result = exhaustive_min_mpv(args.n, args.grid, args.c, args.d, budget=args.budget,
                                prune=not args.no_prune, covers=args.covers)
    doc = search_json(result)
    doc["seed"] = args.seed
    _emit_json(doc, args.out)
    if args.witness and result.best is not None:
        best = result.best
        if isinstance(best, GridCover):
            best = cover_to_partition(best)
        spart.write(best, args.witness)
    return 0 if result.optimal else 1


def n3d2_rows(grid: int = 610):
    maj, _ = mpv(build(ConstructionSpec("majority", {"n": 3})), 2)
    grid_opt = exhaustive_min_mpv(3, 2, 2, 2).value
    gr, _ = mpv(golden_ratio(grid), 2)
    rows = [
        [2, "Majority", maj.numerator, maj.denominator, decimal_str(maj), "3/4", "0.75", "3/4",
         decimal_str(general_lower_bound(3, 2, 2).value), str(grid_opt),
         "match" if maj == Fraction(3, 4) else "mismatch"],
        [3, f"Golden Ratio (N={grid})", gr.numerator, gr.denominator, decimal_str(gr), "1/phi",
         decimal_str(PSI), "0.526", decimal_str(general_lower_bound(3, 2, 3).value), "",
         "match" if abs(float(gr) - PSI) < 1e-3 else "mismatch"],
    ]
    header = ["c", "partition", "measured_num", "measured_den", "measured_decimal", "claimed",
              "claimed_decimal", "claimed_lower_bound", "general_lower_bound", "grid_optimum_N2", "match"]
    return header, rows


def cmd_table(args) -> int:
    if args.which == "rho21":
        _emit(rho21_csv(args.start, args.stop), args.out)
    else:
        header, rows = n3d2_rows(args.grid)
        _emit(table_csv(rows, header), args.out)
    return 0


def cmd_conjecture(args) -> int:
    obj = _load_subject(args) if (args.path or args.kind) else None
    n = obj.n if obj is not None else args.n
    if n is None:
        raise UsageError("conjecture needs --n or a partition")
    t = conjecture_j_threshold(Fraction(args.b), n, Fraction(args.delta), args.log_base)
    doc = {"b": t.b, "n": t.n, "delta": t.delta, "log_base": t.log_base, "c": t.c,
           "threshold": t.threshold, "b_log_inv_b": t.excess}
    if t.threshold_exact is not None:
        doc["threshold_exact"] = t.threshold_exact
    if obj is not None:
        value, (alpha, S) = mpv(obj, obj.n - 1)
        if t.threshold_exact is not None:
            above = value >= t.threshold_exact
        else:
            above = Decimal(value.numerator) / Decimal(value.denominator) >= t.threshold
        doc["partition"] = {"n": obj.n, "c": obj.c, "mpv": value, "witness_part": alpha, "witness_S": S,
                            "c_mpv_minus_1": obj.c * value - 1,
                            "mpv_vs_threshold": "above" if above else "below"}
        if obj.c != t.c:
            doc["partition"]["note"] = f"partition has c={obj.c}, threshold uses c={t.c}"
    doc["status"] = "diagnostic only; conjectured, not checked"
    _emit_json(doc, args.out)
    return 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed, count=args.count)
    line = f"{report.suite}: {report.passed}/{report.count} pass ({report.checks} checks, seed {report.seed})"
    print(line)
    if report.failure is not None:
        print("FAIL reproducer: " + json.dumps(report.failure), file=sys.stderr)
        return 1
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubeshadow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a partition and write it as SPART1")
    _add_construction_flags(p, required_kind=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("eval", help="projection table, mpv, balance, influences")
    p.add_argument("path", nargs="?")
    _add_construction_flags(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--influence", type=int, metavar="K")
    p.add_argument("--check-bounds", action="store_true")
    p.add_argument("--format", choices=("json", "csv", "human"), default="json")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bounds", help="general lower bound, d=1 bound, conjecture threshold")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--eps")
    p.add_argument("--b")
    p.add_argument("--delta")
    p.add_argument("--log-base", choices=("2", "e"), default="2")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", help="exhaustive minimum mpv over grid colorings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", "--N", dest="grid", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--covers", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="recorded in the output; the search is deterministic")
    p.add_argument("--witness", help="write the best partition here as SPART1")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", help="reproduce the rho_{2,1,c} and n=3, d=2 tables")
    p.add_argument("which", choices=("rho21", "n3d2"))
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--stop", type=int, default=15)
    p.add_argument("--grid", type=int, default=610)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("conjecture", help="conjectured threshold for c = 2^(bn), diagnostic")
    p.add_argument("path", nargs="?")
    _add_construction_flags(p)
    p.add_argument("--b", required=True)
    p.add_argument("--delta", default="1/100")
    p.add_argument("--log-base", choices=("2", "e"), default="2")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("verify", help="randomized exact-theorem suites")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=500)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PartitionError, OSError, ValueError) as exc:
        print(f"cubeshadow {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
