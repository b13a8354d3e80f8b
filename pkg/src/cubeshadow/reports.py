"""JSON, CSV and plain-text rendering of reports and tables."""

from __future__ import annotations

import csv
import io
from decimal import Decimal, localcontext
from fractions import Fraction

from .bounds import rho_2_1, iterated_ceiling
from .core import CoordSet

CSV_OPTIONS = {"lineterminator": "\n", "delimiter": ","}


def decimal_str(x, digits: int = 6) -> str:
    """Display-only decimal rendering with ``digits`` significant digits."""
    if isinstance(x, Fraction):
        with localcontext() as ctx:
            ctx.prec = digits + 10
            x = Decimal(x.numerator) / Decimal(x.denominator)
    return format(x, f".{digits}g")


def rational_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator), "decimal": decimal_str(x)}


def coords_str(S: CoordSet, sep: str = ",") -> str:
    return sep.join(str(j) for j in S.coords)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, **CSV_OPTIONS)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def eval_report_json(report) -> dict:
    alpha, S = report.witness
    out = {
        "geometry": {"n": report.n, "N": report.N, "c": report.c},
        "d": report.d,
        "part_volumes": [rational_json(v) for v in report.part_volumes],
        "projections": {f"{a}:{coords_str(T)}": rational_json(v) for (a, T), v in report.projections.items()},
        "mpv": rational_json(report.mpv),
        "witness": {"part": alpha, "S": list(S.coords)},
        "balance": rational_json(report.balance),
    }
    if report.influences is not None:
        out["influence_k"] = report.influence_k
        out["influences"] = {coords_str(T): rational_json(v) for T, v in report.influences.items()}
    if report.checks:
        out["checks"] = [jsonable(c) for c in report.checks]
    if report.notes:
        out["notes"] = list(report.notes)
    return out


def eval_report_csv(report) -> str:
    rows = [
        [a, coords_str(S, " "), v.numerator, v.denominator, decimal_str(v)]
        for (a, S), v in report.projections.items()
    ]
    return _csv(rows, ["part", "S", "num", "den", "decimal"])


def eval_report_human(report) -> str:
    alpha, S = report.witness
    lines = [
        f"n={report.n} N={report.N} c={report.c} d={report.d}",
        "part volumes: " + ", ".join(str(v) for v in report.part_volumes),
        f"balance deviation: {report.balance}",
        f"mpv: {report.mpv} ~ {decimal_str(report.mpv, 4)}  witness part {alpha}, S={list(S.coords)}",
    ]
    for (a, T), v in report.projections.items():
        lines.append(f"  part {a} S={list(T.coords)}: {v} ~ {decimal_str(v, 4)}")
    if report.influences is not None:
        lines.append(f"influences (k={report.influence_k}):")
        for T, v in report.influences.items():
            lines.append(f"  S={list(T.coords)}: {v}")
    for check in report.checks:
        fields = ", ".join(f"{k}={_plain(v)}" for k, v in check.items() if k != "name")
        lines.append(f"check {check['name']}: {fields}")
    lines.extend(report.notes)
    return "\n".join(lines)


def _plain(value):
    if isinstance(value, CoordSet):
        return list(value.coords)
    return str(value)


def jsonable(obj):
    """Recursively convert Fractions, Decimals and CoordSets for json.dumps."""
    if isinstance(obj, Fraction):
        return rational_json(obj)
    if isinstance(obj, Decimal):
        return str(obj)
    if isinstance(obj, CoordSet):
        return list(obj.coords)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def bound_reports_csv(reports) -> str:
    rows = []
    for r in reports:
        value = r.value
        if isinstance(value, Fraction):
            num, den, dec = value.numerator, value.denominator, decimal_str(value)
        else:
            num, den, dec = "", "", str(value)
        measured = "" if r.measured is None else str(r.measured)
        holds = "" if r.holds is None else str(r.holds).lower()
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        rows.append([r.name, params, num, den, dec, measured, holds])
    return _csv(rows, ["bound", "params", "num", "den", "decimal", "measured", "holds"])


# Published values of rho_{2,1,c} for c = 1..15, kept unreduced as printed.
PUBLISHED_RHO21 = [
    "1/1", "1/1", "2/3", "1/2", "1/2", "1/2", "3/7", "3/8",
    "1/3", "1/3", "1/3", "1/3", "4/13", "4/14", "4/15",
]


def rho21_rows(start: int, stop: int):
    """Rows ``(c, rho, iterated ceiling at 1/rho, published value, match)``."""
    for c in range(start, stop + 1):
        rho = rho_2_1(c)
        kappa = iterated_ceiling(1 / rho, 2)
        published = PUBLISHED_RHO21[c - 1] if c <= len(PUBLISHED_RHO21) else ""
        if published:
            match = "match" if Fraction(published) == rho and kappa <= c else "mismatch"
        else:
            match = ""
        yield c, rho, kappa, published, match


def rho21_csv(start: int, stop: int) -> str:
    rows = [
        [c, rho.numerator, rho.denominator, decimal_str(rho), kappa, published, match]
        for c, rho, kappa, published, match in rho21_rows(start, stop)
    ]
    return _csv(rows, ["c", "num", "den", "decimal", "kappa_at_rho", "published", "match"])


def table_csv(rows, header) -> str:
    return _csv(rows, header)
