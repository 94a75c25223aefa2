"""Report model and serialization (JSON, CSV, text)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .errors import InvalidArgument, ReportError

SCHEMA = "isoparam.report/1"
STATUSES = ("pass", "fail", "unknown", "not-applicable")
FORMATS = ("json", "csv", "text")
TIMING_FIELD = "wall_clock_seconds"


def _plain(v):
    """Coerce numpy scalars/arrays and tuples into JSON-stable Python values."""
    if hasattr(v, "tolist"):
        v = v.tolist()
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if hasattr(v, "value") and not isinstance(v, (int, float, str, bool)):
        return v.value
    return v


@dataclass
class Check:
    name: str
    expected: object
    observed: object
    status: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise InvalidArgument(f"status must be one of {STATUSES}, got {self.status!r}")
        self.expected = _plain(self.expected)
        self.observed = _plain(self.observed)
        self.details = _plain(self.details)


def check_le(name: str, observed: float, bound: float, **details) -> Check:
    return Check(name, f"<= {bound:g}", float(observed), "pass" if observed <= bound else "fail", details)


def check_close(name: str, observed: float, expected: float, tol: float, **details) -> Check:
    ok = abs(observed - expected) <= tol
    return Check(name, float(expected), float(observed), "pass" if ok else "fail", {"tol": tol, **details})


def check_true(name: str, ok: bool, observed=None, expected=True, **details) -> Check:
    return Check(name, expected, ok if observed is None else observed, "pass" if ok else "fail", details)


@dataclass
class Report:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    facts: list = field(default_factory=list)
    wall_clock_seconds: float = 0.0
    version: str = __version__
    schema: str = SCHEMA

    def add(self, *checks: Check) -> None:
        self.checks.extend(checks)

    def worst_status(self) -> str:
        statuses = {c.status for c in self.checks}
        return "fail" if "fail" in statuses else "pass"

    def exit_code(self) -> int:
        return 1 if self.worst_status() == "fail" else 0

    def counts(self) -> dict:
        return {s: sum(c.status == s for c in self.checks) for s in STATUSES}

    def to_dict(self) -> dict:
        d = asdict(self)
        d["config"] = _plain(self.config)
        d["certificates"] = _plain(self.certificates)
        d["facts"] = _plain(self.facts)
        d["summary"] = {"status": self.worst_status(), **self.counts()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("schema") != SCHEMA:
            raise InvalidArgument(f"unsupported report schema {d.get('schema')!r}")
        return cls(
            command=d["command"],
            config=d["config"],
            checks=[Check(**c) for c in d["checks"]],
            certificates=d["certificates"],
            facts=d["facts"],
            wall_clock_seconds=d[TIMING_FIELD],
            version=d["version"],
            schema=d["schema"],
        )


def _to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def _to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "expected", "observed", "status"])
    for c in report.checks:
        cells = [c.name]
        for v in (c.expected, c.observed):
            cells.append(v if isinstance(v, (str, int, float)) else json.dumps(v, sort_keys=True))
        cells.append(c.status)
        w.writerow(cells)
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _to_text(report: Report) -> str:
    lines = [f"{report.command}: {report.worst_status().upper()}  ({report.counts()['pass']} pass, {report.counts()['fail']} fail)"]
    width = max((len(c.name) for c in report.checks), default=0)
    for c in report.checks:
        lines.append(f"  [{c.status:>4}] {c.name:<{width}}  observed={_fmt(c.observed)}  expected={_fmt(c.expected)}")
    for f in report.facts:
        lines.append(f"  fact: {json.dumps(f, sort_keys=True)}")
    lines.append(f"  wall clock {report.wall_clock_seconds:.2f}s")
    return "\n".join(lines) + "\n"


def emit(report: Report, fmt: str = "json", path: str | Path | None = None) -> str:
    if fmt not in FORMATS:
        raise InvalidArgument(f"format must be one of {FORMATS}, got {fmt!r}")
    text = {"json": _to_json, "csv": _to_csv, "text": _to_text}[fmt](report)
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise ReportError(f"cannot write report to {path}: {exc}") from exc
    return text


def strip_timing(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != TIMING_FIELD}
