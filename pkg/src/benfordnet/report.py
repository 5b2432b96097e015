"""Report documents and their table/csv/json/svg renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

from . import __version__
from .benford import (
    PRINTED_MEAN,
    ConformanceReport,
    distribution_mean,
    expected_distribution,
)
from .dataset import AveragedDistribution
from .errors import UsageError

SCHEMA_VERSION = 1
FORMATS = ("table", "csv", "json", "svg")
KINDS = ("expected", "analysis", "averaged")
CSV_DECIMALS = 12

_SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"


def digit_symbol(d: int) -> str:
    return _SYMBOLS[d]


@dataclass
class ReportDocument:
    kind: str
    base: int
    position: int
    rows: list[dict[str, Any]]
    summary: dict[str, Any]
    provenance: dict[str, Any] = field(default_factory=dict)
    spec: dict[str, Any] | None = None
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown report kind {self.kind!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> ReportDocument:
        version = obj.get("schema_version")
        if version != SCHEMA_VERSION:
            raise UsageError(f"unsupported report schema_version {version!r}")
        try:
            return cls(**obj)
        except TypeError as exc:
            raise UsageError(f"malformed report document: {exc}") from None

    @classmethod
    def from_json(cls, text: str | bytes) -> ReportDocument:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"report is not valid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise UsageError("report JSON must be an object")
        return cls.from_dict(obj)

    def empirical(self) -> dict[int, float] | None:
        if self.kind == "expected":
            return None
        return {r["digit"]: r["empirical"] for r in self.rows}

    def expected(self) -> dict[int, float]:
        return {r["digit"]: r["expected"] for r in self.rows}


def _printed_row_mean(probs: dict[int, float]) -> float:
    """Mean of the distribution after rounding each probability to 3 decimals."""
    return round(math.fsum(d * round(p, 3) for d, p in probs.items()), 6)


def expected_document(base: int, position: int) -> ReportDocument:
    dist = expected_distribution(base, position)
    probs = dict(dist.probabilities)
    summary = {
        "expected_mean": distribution_mean(dist),
        "printed_row_mean": _printed_row_mean(probs),
    }
    if base == 10:
        summary["published_mean"] = PRINTED_MEAN[position]
        summary["published_mean_matches_row"] = summary["printed_row_mean"] == PRINTED_MEAN[position]
    rows = [{"digit": d, "symbol": digit_symbol(d), "expected": p} for d, p in probs.items()]
    return ReportDocument("expected", base, position, rows, summary)


def _report_summary(rep: ConformanceReport) -> dict[str, Any]:
    return {
        "n_included": rep.n_included,
        "n_excluded": rep.n_excluded,
        "mad": rep.mad,
        "chi_square": rep.chi_square,
        "chi_square_df": rep.chi_square_df,
        "max_deviation_digit": rep.max_deviation_digit,
        "max_deviation": rep.max_deviation,
        "empirical_mean": rep.empirical_mean,
        "expected_mean": rep.expected_mean,
        "verdict": rep.verdict,
    }


def _bands(bands) -> dict[str, float]:
    return {"close": bands.close, "acceptable": bands.acceptable, "marginal": bands.marginal}


def analysis_document(rep: ConformanceReport, provenance=None, spec=None) -> ReportDocument:
    rows = [
        {"digit": d, "symbol": digit_symbol(d), "empirical": rep.empirical[d],
         "expected": rep.expected[d], "delta": rep.empirical[d] - rep.expected[d]}
        for d in rep.expected.digits
    ]
    summary = _report_summary(rep)
    summary["verdict_bands"] = _bands(rep.bands)
    return ReportDocument("analysis", rep.base, rep.position, rows, summary,
                          dict(provenance or {}), spec)


def averaged_document(avg: AveragedDistribution, provenance=None, spec=None) -> ReportDocument:
    exp = avg.expected
    rows = [
        {"digit": d, "symbol": digit_symbol(d), "empirical": avg.per_digit_mean[d],
         "expected": exp[d], "delta": avg.per_digit_mean[d] - exp[d],
         "min": avg.per_digit_min[d], "max": avg.per_digit_max[d]}
        for d in exp.digits
    ]
    summary = {
        "replicates": avg.replicates,
        "mad": avg.mad,
        "mean_chi_square": avg.mean_chi_square,
        "chi_square_df": avg.reports[0].chi_square_df,
        "max_deviation_digit": avg.max_deviation_digit,
        "max_deviation": avg.max_deviation,
        "empirical_mean": avg.empirical_mean,
        "expected_mean": distribution_mean(exp),
        "verdict": avg.verdict,
        "verdict_bands": _bands(avg.reports[0].bands),
        "per_replicate": [
            dict(_report_summary(r), empirical=[r.empirical[d] for d in exp.digits])
            for r in avg.reports
        ],
    }
    return ReportDocument("averaged", avg.base, avg.position, rows, summary,
                          dict(provenance or {}), spec)


def chi_square_of(doc: ReportDocument) -> float | None:
    s = doc.summary
    return s.get("chi_square", s.get("mean_chi_square"))


def _fmt(x, decimals=4) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.{decimals}f}"
    return str(x)


def _render_table(doc: ReportDocument) -> str:
    out = [f"benfordnet {doc.tool_version}  {doc.kind} report  base {doc.base}  position {doc.position}"]
    if doc.provenance:
        out.append("input: " + ", ".join(f"{k}={v}" for k, v in sorted(doc.provenance.items())))
    if doc.spec:
        out.append("spec: " + ", ".join(f"{k}={v}" for k, v in doc.spec.items() if v is not None))
    out.append("")
    if doc.kind == "expected":
        out.append(f"{'digit':>5}  {'expected':>9}  {'rounded':>7}")
        for r in doc.rows:
            out.append(f"{r['symbol']:>5}  {r['expected']:9.6f}  {r['expected']:7.3f}")
    else:
        extra = doc.kind == "averaged"
        head = f"{'digit':>5}  {'empirical':>9}  {'expected':>9}  {'delta':>9}"
        if extra:
            head += f"  {'min':>9}  {'max':>9}"
        out.append(head)
        for r in doc.rows:
            line = (f"{r['symbol']:>5}  {r['empirical']:9.6f}  {r['expected']:9.6f}  "
                    f"{r['delta']:+9.6f}")
            if extra:
                line += f"  {r['min']:9.6f}  {r['max']:9.6f}"
            out.append(line)
    out.append("")
    s = doc.summary
    if doc.kind == "expected":
        out.append(f"mean (exact)       {s['expected_mean']:.4f}")
        out.append(f"mean (printed row) {s['printed_row_mean']:.3f}")
        if "published_mean" in s:
            note = "" if s["published_mean_matches_row"] else "  (differs from printed-row mean)"
            out.append(f"mean (published)   {s['published_mean']:.3f}{note}")
    else:
        for key in ("n_included", "n_excluded", "replicates", "mad", "chi_square",
                    "mean_chi_square", "chi_square_df", "max_deviation_digit",
                    "max_deviation", "empirical_mean", "expected_mean", "verdict"):
            if key in s:
                value = s[key]
                if key == "max_deviation_digit":
                    value = digit_symbol(value)
                out.append(f"{key:<20}{_fmt(value, 6)}")
        b = s["verdict_bands"]
        out.append(f"verdict bands (MAD): close < {b['close']}, acceptable < {b['acceptable']}, "
                   f"marginal < {b['marginal']}, else nonconforming")
    return "\n".join(out) + "\n"


def _num(x) -> str:
    return "" if x is None else f"{x:.{CSV_DECIMALS}f}"


def _render_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["digit", "empirical", "expected", "delta"])
    for r in doc.rows:
        w.writerow([r["symbol"], _num(r.get("empirical")), _num(r["expected"]), _num(r.get("delta"))])
    return buf.getvalue()


def render_json(doc: ReportDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, sort_keys=True) + "\n"


def render_report(doc: ReportDocument, format: str) -> bytes:
    """Serialize ``doc``; every format is byte-deterministic."""
    if format == "table":
        return _render_table(doc).encode()
    if format == "csv":
        return _render_csv(doc).encode()
    if format == "json":
        return render_json(doc).encode()
    if format == "svg":
        from .plotting import report_figure, svg_bytes
        return svg_bytes(report_figure(doc))
    raise UsageError(f"unknown format {format!r}; expected one of {FORMATS}")


def compare_documents(docs: list[ReportDocument]) -> dict[str, Any]:
    """Per-digit deltas of each report against the first, with scores side by side."""
    if len(docs) < 2:
        raise UsageError("compare needs at least two reports")
    first = docs[0]
    for d in docs[1:]:
        if (d.base, d.position) != (first.base, first.position):
            raise UsageError(
                f"cannot compare base {first.base} position {first.position} "
                f"with base {d.base} position {d.position}"
            )
    if any(d.kind == "expected" for d in docs):
        raise UsageError("compare needs analysis reports, not expected-only documents")
    ref = first.empirical()
    digits = [r["digit"] for r in first.rows]
    reports = []
    for i, d in enumerate(docs):
        emp = d.empirical()
        reports.append({
            "index": i,
            "label": d.provenance.get("label") or f"report {i}",
            "n": (d.spec or {}).get("n"),
            "mad": d.summary["mad"],
            "chi_square": chi_square_of(d),
            "verdict": d.summary["verdict"],
            "empirical": [emp[k] for k in digits],
            "delta": [emp[k] - ref[k] for k in digits],
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "base": first.base,
        "position": first.position,
        "digits": digits,
        "expected": [first.expected()[k] for k in digits],
        "reports": reports,
    }


def render_comparison(cmp: dict[str, Any], format: str) -> bytes:
    if format == "json":
        return (json.dumps(cmp, indent=2, sort_keys=True) + "\n").encode()
    if format == "svg":
        from .plotting import comparison_figure, svg_bytes
        return svg_bytes(comparison_figure(cmp))
    reports = cmp["reports"]
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["report", "label", "n", "mad", "chi_square", "verdict"]
                   + [f"delta_{digit_symbol(k)}" for k in cmp["digits"]])
        for r in reports:
            w.writerow([r["index"], r["label"], "" if r["n"] is None else r["n"], _num(r["mad"]),
                        _num(r["chi_square"]), r["verdict"]] + [_num(x) for x in r["delta"]])
        return buf.getvalue().encode()
    if format == "table":
        out = [f"comparison  base {cmp['base']}  position {cmp['position']}  (deltas vs report 0)", ""]
        out.append(f"{'#':>3}  {'label':<24}{'n':>8}  {'mad':>9}  {'chi_square':>12}  verdict")
        for r in reports:
            n = "-" if r["n"] is None else str(r["n"])
            out.append(f"{r['index']:>3}  {r['label'][:24]:<24}{n:>8}  {r['mad']:9.6f}  "
                       f"{r['chi_square']:12.3f}  {r['verdict']}")
        out.append("")
        out.append(f"{'digit':>5}" + "".join(f"  {'#' + str(r['index']):>10}" for r in reports))
        for j, k in enumerate(cmp["digits"]):
            out.append(f"{digit_symbol(k):>5}" + "".join(f"  {r['delta'][j]:+10.6f}" for r in reports))
        return ("\n".join(out) + "\n").encode()
    raise UsageError(f"unknown format {format!r}; expected one of {FORMATS}")
