"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 data error (including unreadable
input and unwritable output), 3 failed --assert-conformance.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .benford import VERDICTS, VerdictBands, verdict_rank
from .dataset import STRATEGIES, SelectionSpec, load_path, replicate_analysis
from .errors import DataError, UsageError
from .report import (
    FORMATS,
    ReportDocument,
    analysis_document,
    averaged_document,
    compare_documents,
    expected_document,
    render_comparison,
    render_report,
)
from .synth import MODELS, S_LAWS, GeneratorSpec, generate, to_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ASSERTION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _choice(options):
    """argparse type accepting hyphenated spellings of underscore names."""
    def convert(text):
        value = text.replace("-", "_")
        if value not in options:
            raise argparse.ArgumentTypeError(
                f"invalid choice {text!r} (choose from {', '.join(o.replace('_', '-') for o in options)})")
        return value
    return convert


def _bands(text):
    try:
        close, acceptable, marginal = (float(x) for x in text.split(","))
        return VerdictBands(close, acceptable, marginal)
    except (ValueError, UsageError) as exc:
        raise argparse.ArgumentTypeError(f"bands must be three increasing numbers: {exc}")


def _write(data: bytes, output):
    if output is None or output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        Path(output).write_bytes(data)
    except OSError as exc:
        raise DataError(f"cannot write {output}: {exc.strerror}") from None


def _save_figure(fig, path):
    from .plotting import save_figure
    try:
        save_figure(fig, path)
    except OSError as exc:
        raise DataError(f"cannot write figure {path}: {exc.strerror}") from None


def _add_output(p, formats=FORMATS):
    p.add_argument("--format", choices=formats, default="table")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--figure", metavar="PATH",
                   help="also render a matplotlib figure; suffix picks png/svg/pdf")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="benfordnet",
                     description="Benford first-digit forensics for connectivity counts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expected", help="theoretical digit distribution")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--position", type=int, default=1, choices=(1, 2))
    _add_output(p)

    p = sub.add_parser("analyze", help="digit conformance of one metric in a dataset")
    p.add_argument("input")
    p.add_argument("--input-format", choices=("csv", "jsonl"),
                   help="default: from the file suffix")
    p.add_argument("--metric", required=True)
    p.add_argument("--metrics", help="comma-separated columns that must be present "
                                     "(default: --metric and --order-metric)")
    p.add_argument("--strategy", type=_choice(STRATEGIES), default="all")
    p.add_argument("--order-metric")
    p.add_argument("--n", type=int)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--ascending", action="store_true",
                   help="sorted strategies take the smallest values instead of the largest")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--position", type=int, default=1, choices=(1, 2))
    p.add_argument("--bands", type=_bands, metavar="CLOSE,ACCEPTABLE,MARGINAL",
                   help="MAD band limits overriding the defaults")
    p.add_argument("--label", help="free-text label stored in the report provenance")
    p.add_argument("--assert-conformance", choices=VERDICTS[:3], metavar="BAND",
                   help="exit 3 when the verdict is worse than BAND")
    _add_output(p)

    p = sub.add_parser("synth", help="write a synthetic dataset CSV")
    p.add_argument("--model", type=_choice(MODELS), default="uniform_mixture")
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--s-max", type=int, default=10**7)
    p.add_argument("--s-law", type=_choice(S_LAWS), default="log_uniform")
    p.add_argument("--fraction", type=float, default=0.3, help="planted: share overwritten")
    p.add_argument("--value", type=int, default=500_000, help="planted: value written")
    p.add_argument("--step", type=int, default=100, help="padded: rounding step")
    p.add_argument("--probability", type=float, default=0.8, help="padded: chance to pad")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("compare", help="compare two or more JSON reports")
    p.add_argument("reports", nargs="+")
    _add_output(p)
    return parser


def cmd_expected(args) -> int:
    doc = expected_document(args.base, args.position)
    _write(render_report(doc, args.format), args.output)
    if args.figure:
        from .plotting import report_figure
        _save_figure(report_figure(doc), args.figure)
    return EXIT_OK


def cmd_analyze(args) -> int:
    spec = SelectionSpec(
        strategy=args.strategy,
        metric=args.metric,
        n=args.n,
        seed=args.seed,
        replicates=args.replicates,
        order_metric=args.order_metric,
        descending=not args.ascending,
    )
    if args.metrics:
        metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    else:
        metrics = [args.metric] + ([args.order_metric] if args.order_metric else [])
    for m in (args.metric, args.order_metric):
        if m and m not in metrics:
            metrics.append(m)
    try:
        dataset = load_path(args.input, args.input_format, metrics)
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc.strerror}") from None
    avg = replicate_analysis(dataset, spec, args.base, args.position, args.bands)
    provenance = {k: dataset.source[k] for k in ("name", "format", "sha256")}
    provenance["records"] = len(dataset)
    if args.label:
        provenance["label"] = args.label
    if spec.strategy == "random":
        doc = averaged_document(avg, provenance, spec.as_dict())
    else:
        doc = analysis_document(avg.reports[0], provenance, spec.as_dict())
    _write(render_report(doc, args.format), args.output)
    if args.figure:
        from .plotting import report_figure
        _save_figure(report_figure(doc), args.figure)
    if args.assert_conformance and verdict_rank(doc.summary["verdict"]) > verdict_rank(args.assert_conformance):
        print(f"conformance assertion failed: verdict {doc.summary['verdict']} "
              f"is worse than {args.assert_conformance}", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


def sidecar_path(output) -> Path:
    return Path(output).with_suffix(".provenance.json")


def cmd_synth(args) -> int:
    spec = GeneratorSpec(
        model=args.model,
        count=args.count,
        seed=args.seed,
        s_max=args.s_max,
        s_law=args.s_law,
        fraction=args.fraction,
        planted_value=args.value,
        step=args.step,
        probability=args.probability,
    )
    values = generate(spec)
    _write(to_csv({"value": values}).encode(), args.output)
    sidecar = {
        "tool_version": __version__,
        "generator": spec.as_dict(),
        "rng": "numpy PCG64 via SeedSequence([seed, stream])",
        "rows": len(values),
        "output": Path(args.output).name,
    }
    _write((json.dumps(sidecar, indent=2, sort_keys=True) + "\n").encode(), sidecar_path(args.output))
    return EXIT_OK


def cmd_compare(args) -> int:
    docs = []
    for path in args.reports:
        try:
            text = Path(path).read_bytes()
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc.strerror}") from None
        doc = ReportDocument.from_json(text)
        doc.provenance.setdefault("label", doc.provenance.get("name") or Path(path).stem)
        docs.append(doc)
    cmp = compare_documents(docs)
    _write(render_comparison(cmp, args.format), args.output)
    if args.figure:
        from .plotting import comparison_figure
        _save_figure(comparison_figure(cmp), args.figure)
    return EXIT_OK


COMMANDS = {
    "expected": cmd_expected,
    "analyze": cmd_analyze,
    "synth": cmd_synth,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"benfordnet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"benfordnet: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
