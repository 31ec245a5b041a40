"""Result records for inequality checks and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

REL_SLACK = 1e-9
ABS_SLACK = 1e-12

CSV_FIELDS = ["inequality_id", "generator", "psi", "g_or_phi", "t", "s", "extra_params",
              "lhs", "rhs", "ratio", "pass", "M", "c0", "c1", "J", "C"]


def passes(lhs: float, rhs: float) -> bool:
    if math.isnan(lhs) or math.isnan(rhs):
        return False
    return lhs <= rhs * (1.0 + REL_SLACK) + ABS_SLACK


def safe_ratio(lhs: float, rhs: float) -> float:
    if math.isnan(lhs) or math.isnan(rhs):
        return math.nan
    if rhs == 0.0:
        return 0.0 if lhs == 0.0 else math.inf
    if math.isinf(rhs):
        return 0.0 if math.isfinite(lhs) else math.nan
    return lhs / rhs


@dataclass
class BoundCheckRecord:
    inequality_id: str
    lhs: float
    rhs: float
    generator: str = ""
    psi: str = ""
    g_or_phi: str = ""
    t: float = math.nan
    s: float = math.nan
    extra: dict = field(default_factory=dict)
    M: float = math.nan
    c0: float = math.nan
    c1: float = math.nan
    J: float = math.nan
    C: float = math.nan
    ratio: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.ratio = safe_ratio(self.lhs, self.rhs)
        self.passed = passes(self.lhs, self.rhs)

    @classmethod
    def failure(cls, inequality_id: str, reason: str, **kw) -> "BoundCheckRecord":
        """A failed record for a check whose computation raised."""
        extra = dict(kw.pop("extra", {}))
        extra["error"] = reason
        rec = cls(inequality_id, math.nan, math.nan, extra=extra, **kw)
        return rec

    def row(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "generator": self.generator,
            "psi": self.psi,
            "g_or_phi": self.g_or_phi,
            "t": _fmt(self.t),
            "s": _fmt(self.s),
            "extra_params": ";".join(f"{k}={_fmt(v)}" for k, v in sorted(self.extra.items())),
            "lhs": _fmt(self.lhs),
            "rhs": _fmt(self.rhs),
            "ratio": _fmt(self.ratio),
            "pass": "true" if self.passed else "false",
            "M": _fmt(self.M),
            "c0": _fmt(self.c0),
            "c1": _fmt(self.c1),
            "J": _fmt(self.J),
            "C": _fmt(self.C),
        }

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["extra_params"] = d.pop("extra")
        return {k: _jsonable(v) for k, v in d.items()}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        v = float(v)
        if math.isnan(v):
            return ""
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, float):
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def records_to_json(records, header: dict | None = None) -> str:
    payload = {"header": header or {}, "records": [r.to_json() for r in records]}
    return json.dumps(payload, indent=1, sort_keys=True, default=str)


def records_to_plotdata(records) -> str:
    """Whitespace-separated ``t lhs rhs`` blocks, one per inequality and series.

    Records without a ``t`` coordinate are not plotted.
    """
    blocks: dict[tuple, list] = {}
    for r in records:
        if math.isnan(r.t):
            continue
        key = (r.inequality_id, r.generator, r.psi, r.g_or_phi)
        blocks.setdefault(key, []).append(r)
    out = []
    for key, rows in blocks.items():
        out.append("# " + " ".join(k or "-" for k in key))
        out.append("# t lhs rhs")
        for r in rows:
            out.append(f"{_fmt(r.t) or 'nan'} {_fmt(r.lhs) or 'nan'} {_fmt(r.rhs) or 'nan'}")
        out.append("")
        out.append("")
    return "\n".join(out)


def summarize(records) -> dict:
    """Counts and worst observed ratio per inequality id."""
    out: dict[str, dict] = {}
    for r in records:
        s = out.setdefault(r.inequality_id, {"total": 0, "failed": 0, "worst_ratio": 0.0})
        s["total"] += 1
        if not r.passed:
            s["failed"] += 1
        if math.isnan(r.ratio):
            s["worst_ratio"] = math.nan
        elif not math.isnan(s["worst_ratio"]):
            s["worst_ratio"] = max(s["worst_ratio"], r.ratio)
    return out
