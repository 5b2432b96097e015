"""Matplotlib figures for reports: empirical vs. Benford bars per digit.

Figures are built on ``matplotlib.figure.Figure`` directly, without pyplot,
so nothing touches global backend state. SVG output is byte-stable: the
date metadata is dropped, text stays as text and element ids are salted
with a fixed string.
"""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .report import ReportDocument, digit_symbol

EMPIRICAL_COLOR = "#4c72b0"
EXPECTED_COLOR = "#dd8452"
FIGSIZE = (6.4, 4.0)

_STABLE_RC = {
    "svg.hashsalt": "benfordnet",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _title(doc: ReportDocument) -> str:
    place = "first" if doc.position == 1 else "second"
    what = {"expected": "Benford expectation", "analysis": "Observed vs. Benford",
            "averaged": f"Mean of {doc.summary.get('replicates')} replicates vs. Benford"}[doc.kind]
    metric = (doc.spec or {}).get("metric")
    label = f" ({metric})" if metric else ""
    return f"{what}{label}: {place} digit, base {doc.base}"


def report_figure(doc: ReportDocument) -> Figure:
    """Grouped bar chart with one empirical/expected bar pair per digit.

    Bars carry gids ``empirical-<digit>`` and ``expected-<digit>`` so the
    SVG can be inspected structurally.
    """
    with matplotlib.rc_context(_STABLE_RC):
        fig = Figure(figsize=FIGSIZE)
        ax = fig.add_subplot()
        digits = [r["digit"] for r in doc.rows]
        xs = list(range(len(digits)))
        expected = [r["expected"] for r in doc.rows]
        if doc.kind == "expected":
            bars = ax.bar(xs, expected, 0.6, color=EXPECTED_COLOR, label="Benford")
            for d, b in zip(digits, bars):
                b.set_gid(f"expected-{digit_symbol(d)}")
        else:
            w = 0.4
            emp = [r["empirical"] for r in doc.rows]
            yerr = None
            if doc.kind == "averaged":
                yerr = [[e - r["min"] for e, r in zip(emp, doc.rows)],
                        [r["max"] - e for e, r in zip(emp, doc.rows)]]
            eb = ax.bar([x - w / 2 for x in xs], emp, w, color=EMPIRICAL_COLOR,
                        label="observed", yerr=yerr, capsize=2 if yerr else 0)
            xb = ax.bar([x + w / 2 for x in xs], expected, w, color=EXPECTED_COLOR,
                        label="Benford")
            for d, a, b in zip(digits, eb, xb):
                a.set_gid(f"empirical-{digit_symbol(d)}")
                b.set_gid(f"expected-{digit_symbol(d)}")
            s = doc.summary
            ax.text(0.98, 0.80, f"MAD {s['mad']:.4f}\n{s['verdict']}", transform=ax.transAxes,
                    ha="right", va="top")
        ax.set_xticks(xs, [digit_symbol(d) for d in digits])
        ax.set_xlabel("digit")
        ax.set_ylabel("frequency")
        ax.set_title(_title(doc))
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig


def comparison_figure(cmp: dict) -> Figure:
    """One line per report plus the Benford curve, like an N-sweep overlay."""
    with matplotlib.rc_context(_STABLE_RC):
        fig = Figure(figsize=FIGSIZE)
        ax = fig.add_subplot()
        labels = [digit_symbol(d) for d in cmp["digits"]]
        xs = list(range(len(labels)))
        for r in cmp["reports"]:
            tag = r["label"] if r["n"] is None else f"{r['label']} (N={r['n']})"
            line, = ax.plot(xs, r["empirical"], marker="o", markersize=3, label=tag)
            line.set_gid(f"report-{r['index']}")
        ax.plot(xs, cmp["expected"], "k--", label="Benford", gid="expected")
        ax.set_xticks(xs, labels)
        ax.set_xlabel("digit")
        ax.set_ylabel("frequency")
        place = "first" if cmp["position"] == 1 else "second"
        ax.set_title(f"Comparison: {place} digit, base {cmp['base']}")
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
    return fig


def svg_bytes(fig: Figure) -> bytes:
    buf = io.BytesIO()
    with matplotlib.rc_context(_STABLE_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def save_figure(fig: Figure, path) -> Path:
    """Write ``fig`` to ``path``; the suffix picks the format (png, svg, pdf)."""
    path = Path(path)
    fmt = path.suffix.lstrip(".").lower() or "png"
    metadata = {"Date": None} if fmt in ("svg", "pdf") else None
    with matplotlib.rc_context(_STABLE_RC):
        fig.savefig(path, format=fmt, metadata=metadata, dpi=150)
    return path
