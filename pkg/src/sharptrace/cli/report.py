"""Check and report records plus JSON, CSV and text rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

STATUSES = ("pass", "fail", "flagged")


def format_residual(value) -> str | float:
    """Exact values become decimal strings of rationals ("0", "3/16"); floats stay floats."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    return str(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (Fraction,)):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


@dataclass
class Check:
    """One verification result.

    ``status`` is ``pass`` iff the residual is within tolerance (literally
    zero for exact checks). ``flagged`` marks a documented discrepancy in a
    printed formula and does not fail a suite.
    """

    name: str
    paper_ref: str
    status: str
    residual: object
    tolerance: object
    runtime_ms: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "paper_ref": self.paper_ref,
            "status": self.status,
            "residual": format_residual(self.residual),
            "tolerance": format_residual(self.tolerance),
            "runtime_ms": self.runtime_ms,
            "details": _jsonable(self.details),
        }


def exact_check(name: str, ref: str, residual, details=None, flag_if_nonzero: bool = False) -> Check:
    zero = residual == 0
    status = "pass" if zero else ("flagged" if flag_if_nonzero else "fail")
    return Check(name, ref, status, residual, 0, details=dict(details or {}))


def numeric_check(name: str, ref: str, residual: float, tol: float, details=None, flag_if_over: bool = False) -> Check:
    ok = math.isfinite(residual) and abs(residual) <= tol
    status = "pass" if ok else ("flagged" if flag_if_over else "fail")
    return Check(name, ref, status, float(residual), tol, details=dict(details or {}))


@dataclass
class Report:
    suite: str
    version: str
    config: dict
    checks: list
    timestamp: str | None = None

    @property
    def summary(self) -> dict:
        out = {s: 0 for s in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "version": self.version,
            "config": _jsonable(self.config),
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary,
        }
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out


CSV_FIELDS = ["name", "paper_ref", "status", "residual", "tolerance", "runtime_ms", "details"]


def render_report(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for c in report.checks:
            d = c.to_dict()
            d["details"] = json.dumps(d["details"], sort_keys=True)
            w.writerow([d[k] for k in CSV_FIELDS])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"suite {report.suite} (sharptrace {report.version})"]
        for c in report.checks:
            lines.append(f"[{c.status.upper():7}] {c.name}  residual={format_residual(c.residual)}  tol={format_residual(c.tolerance)}")
        s = report.summary
        lines.append(f"{s['pass']} pass, {s['fail']} fail, {s['flagged']} flagged")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def render_rows(header: list, rows: list, fmt: str) -> str:
    """Tabular output for sampling commands."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in r])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        width = max(len(h) for h in header) + 2
        lines = ["".join(h.ljust(width + 10) for h in header)]
        for r in rows:
            lines.append("".join(f"{x:<{width + 10}.12g}" if isinstance(x, float) else str(x).ljust(width + 10) for x in r))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
