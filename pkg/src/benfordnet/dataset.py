"""Connectivity dataset ingestion and the sorted/random selection protocol.

Random selections draw from numpy's PCG64 generator. The generator for
replicate ``i`` of master seed ``s`` is seeded with
``numpy.random.SeedSequence([s, i])``, so every replicate is reproducible
on its own and independent of how many replicates are requested.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import IO

import numpy as np

from .benford import (
    ConformanceReport,
    VerdictBands,
    conformance_report,
    default_bands,
    distribution_mean,
    max_deviation,
)
from .digits import DigitDistribution, digit_histogram
from .errors import DataError, EmptyHistogramError, SchemaError, UsageError

FORMATS = ("csv", "jsonl")
STRATEGIES = ("all", "sorted_top", "random", "cross_sorted")
SEED_LIMIT = 2**64

_UNSIGNED = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Record:
    id: str | None
    metrics: Mapping[str, int]


@dataclass(frozen=True)
class ProfileDataset:
    records: tuple[Record, ...]
    metric_names: tuple[str, ...]
    source: Mapping[str, str] = field(default_factory=dict)

    def __len__(self):
        return len(self.records)

    def column(self, metric: str) -> list[int]:
        if metric not in self.metric_names:
            raise UsageError(f"unknown metric {metric!r}; dataset has {list(self.metric_names)}")
        return [r.metrics[metric] for r in self.records]

    @classmethod
    def from_columns(cls, columns: Mapping[str, Sequence[int]], ids=None,
                     source=None) -> ProfileDataset:
        """Build a dataset directly from equal-length metric columns."""
        names = tuple(columns)
        lengths = {len(c) for c in columns.values()}
        if len(lengths) > 1:
            raise DataError("metric columns differ in length")
        n = lengths.pop() if lengths else 0
        records = []
        for i in range(n):
            metrics = {}
            for name in names:
                v = int(columns[name][i])
                if v < 0:
                    raise DataError(f"negative value {v} for metric {name!r}", index=i)
                metrics[name] = v
            records.append(Record(None if ids is None else str(ids[i]), metrics))
        return cls(tuple(records), names, dict(source or {"format": "memory"}))


def _parse_cell(text: str, metric: str, line: int) -> int:
    text = text.strip()
    if text.startswith("-") and _UNSIGNED.fullmatch(text[1:]):
        raise DataError(f"negative value {text} for metric {metric!r}", line=line)
    if not _UNSIGNED.fullmatch(text):
        raise DataError(f"non-integer value {text!r} for metric {metric!r}", line=line)
    return int(text)


def _load_csv(text: str, metrics: Sequence[str]) -> list[Record]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SchemaError("empty CSV input: header row required", line=1) from None
    for m in metrics:
        if m not in header:
            raise SchemaError(f"missing column {m!r}", line=1)
    cols = {m: header.index(m) for m in metrics}
    id_col = header.index("id") if "id" in header else None
    records = []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DataError(f"expected {len(header)} cells, found {len(row)}", line=line)
        values = {m: _parse_cell(row[i], m, line) for m, i in cols.items()}
        records.append(Record(row[id_col] if id_col is not None else None, values))
    return records


def _load_jsonl(text: str, metrics: Sequence[str]) -> list[Record]:
    records = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid JSON: {exc.msg}", line=line_no) from None
        if not isinstance(obj, dict):
            raise DataError("each line must be a JSON object", line=line_no)
        values = {}
        for m in metrics:
            if m not in obj:
                raise SchemaError(f"missing field {m!r}", line=line_no)
            v = obj[m]
            if isinstance(v, bool) or not isinstance(v, int):
                raise DataError(f"non-integer value {v!r} for metric {m!r}", line=line_no)
            if v < 0:
                raise DataError(f"negative value {v} for metric {m!r}", line=line_no)
            values[m] = v
        rid = obj.get("id")
        records.append(Record(None if rid is None else str(rid), values))
    return records


def load(source: IO[bytes] | bytes, format: str, metrics: Sequence[str],
         name: str = "<stream>") -> ProfileDataset:
    """Parse CSV or JSONL connectivity data declaring ``metrics``.

    Metric values must be unsigned base-10 integers; they are kept as
    exact Python ints. Errors carry the 1-based line number.
    """
    if format not in FORMATS:
        raise UsageError(f"unknown input format {format!r}; expected one of {FORMATS}")
    if not metrics:
        raise UsageError("at least one metric must be declared")
    data = source if isinstance(source, bytes) else source.read()
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise DataError(f"input is not UTF-8: {exc.reason}") from None
    records = _load_csv(text, metrics) if format == "csv" else _load_jsonl(text, metrics)
    provenance = {
        "name": name,
        "format": format,
        "sha256": hashlib.sha256(data).hexdigest(),
        "ingested_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return ProfileDataset(tuple(records), tuple(metrics), provenance)


def load_path(path, format: str | None = None, metrics: Sequence[str] = ()) -> ProfileDataset:
    path = str(path)
    if format is None:
        format = "jsonl" if path.endswith((".jsonl", ".ndjson")) else "csv"
    with open(path, "rb") as fh:
        return load(fh, format, metrics, name=path.rsplit("/", 1)[-1])


@dataclass(frozen=True)
class SelectionSpec:
    strategy: str = "all"
    metric: str = "value"
    n: int | None = None
    seed: int | None = None
    replicates: int = 1
    order_metric: str | None = None
    descending: bool = True

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise UsageError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.n is not None and self.n < 1:
            raise UsageError("n must be a positive integer")
        if self.replicates < 1:
            raise UsageError("replicates must be >= 1")
        if self.strategy != "random" and self.replicates != 1:
            raise UsageError("replicates apply to the random strategy only")
        if self.strategy == "random":
            if self.seed is None:
                raise UsageError("the random strategy requires an explicit seed")
        if self.seed is not None and not 0 <= self.seed < SEED_LIMIT:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if self.strategy == "cross_sorted":
            if self.order_metric is None:
                raise UsageError("cross_sorted requires order_metric")
            if self.order_metric == self.metric:
                raise UsageError("cross_sorted requires order_metric different from metric")

    def as_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "metric": self.metric,
            "order_metric": self.order_metric,
            "n": self.n,
            "seed": self.seed,
            "replicates": self.replicates,
            "descending": self.descending,
        }


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, replicate])))


def _top_indices(keys: list[int], n: int, descending: bool) -> list[int]:
    # sorted() is stable, so equal keys keep input order
    sign = -1 if descending else 1
    return sorted(range(len(keys)), key=lambda i: sign * keys[i])[:n]


def select(dataset: ProfileDataset, spec: SelectionSpec) -> list[list[int]]:
    """Metric series chosen by ``spec``, one list per replicate."""
    values = dataset.column(spec.metric)
    size = len(values)
    n = size if spec.n is None else spec.n
    if n > size:
        raise DataError(f"n = {n} exceeds dataset size {size}")
    if spec.strategy == "all":
        return [list(values)]
    if spec.strategy == "sorted_top":
        return [[values[i] for i in _top_indices(values, n, spec.descending)]]
    if spec.strategy == "cross_sorted":
        keys = dataset.column(spec.order_metric)
        return [[values[i] for i in _top_indices(keys, n, spec.descending)]]
    out = []
    for r in range(spec.replicates):
        idx = replicate_rng(spec.seed, r).choice(size, size=n, replace=False)
        out.append([values[i] for i in idx.tolist()])
    return out


@dataclass(frozen=True)
class AveragedDistribution:
    """Per-digit frequencies averaged over replicate selections."""

    expected: DigitDistribution
    per_digit_mean: Mapping[int, float]
    per_digit_min: Mapping[int, float]
    per_digit_max: Mapping[int, float]
    replicates: int
    reports: tuple[ConformanceReport, ...]
    mad: float
    max_deviation_digit: int
    max_deviation: float
    empirical_mean: float
    mean_chi_square: float
    verdict: str

    @property
    def base(self) -> int:
        return self.expected.base

    @property
    def position(self) -> int:
        return self.expected.position

    @property
    def mean_distribution(self) -> DigitDistribution:
        return DigitDistribution(self.base, self.position, self.per_digit_mean)


def average_reports(reports: Sequence[ConformanceReport],
                    bands: VerdictBands | None = None) -> AveragedDistribution:
    if not reports:
        raise UsageError("no replicate reports to average")
    expected = reports[0].expected
    if bands is None:
        bands = default_bands(expected.position)
    digits = expected.digits
    mean = {d: math.fsum(r.empirical[d] for r in reports) / len(reports) for d in digits}
    # fsum / k can overshoot the extreme replicate value by one ulp
    lo = {d: min(r.empirical[d] for r in reports) for d in digits}
    hi = {d: max(r.empirical[d] for r in reports) for d in digits}
    mean = {d: min(max(mean[d], lo[d]), hi[d]) for d in digits}
    mean_dist = DigitDistribution(expected.base, expected.position, mean)
    m = math.fsum(abs(mean[d] - expected[d]) for d in digits) / len(digits)
    digit, dev = max_deviation(mean_dist, expected)
    return AveragedDistribution(
        expected=expected,
        per_digit_mean=mean,
        per_digit_min=lo,
        per_digit_max=hi,
        replicates=len(reports),
        reports=tuple(reports),
        mad=m,
        max_deviation_digit=digit,
        max_deviation=dev,
        empirical_mean=distribution_mean(mean),
        mean_chi_square=math.fsum(r.chi_square for r in reports) / len(reports),
        verdict=bands.verdict(m),
    )


def replicate_analysis(dataset: ProfileDataset, spec: SelectionSpec, base: int = 10,
                       position: int = 1, bands: VerdictBands | None = None) -> AveragedDistribution:
    """Histogram, normalize and score each replicate selection, then average."""
    reports = []
    for r, series in enumerate(select(dataset, spec)):
        hist = digit_histogram(series, base, position)
        if hist.n_included == 0:
            raise EmptyHistogramError(f"replicate {r} has no values with a digit at position {position}")
        reports.append(conformance_report(hist, bands))
    return average_reports(reports, bands)


__all__ = [
    "AveragedDistribution",
    "ProfileDataset",
    "Record",
    "SelectionSpec",
    "average_reports",
    "load",
    "load_path",
    "replicate_analysis",
    "replicate_rng",
    "select",
]
