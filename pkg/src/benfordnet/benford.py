"""Benford expectations for any base and conformance statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .digits import (
    DigitDistribution,
    DigitHistogram,
    check_base_position,
    legal_digits,
    normalize,
)
from .errors import EmptyHistogramError, UsageError

# Decimal first- and second-digit frequencies as published, 3 decimals,
# with the published means.
PRINTED_FIRST_DIGIT = {1: 0.301, 2: 0.176, 3: 0.125, 4: 0.097, 5: 0.079,
                       6: 0.067, 7: 0.058, 8: 0.051, 9: 0.046}
PRINTED_SECOND_DIGIT = {0: 0.120, 1: 0.114, 2: 0.109, 3: 0.104, 4: 0.100,
                        5: 0.097, 6: 0.093, 7: 0.090, 8: 0.088, 9: 0.085}
PRINTED_MEAN = {1: 3.441, 2: 4.187}

# Chi-square critical values keyed by (df, alpha). df 8 is the decimal
# first-digit test, df 9 the decimal second-digit test.
CHI_SQUARE_CRITICAL = {
    (8, 0.05): 15.507,
    (8, 0.01): 20.090,
    (9, 0.05): 16.919,
    (9, 0.01): 21.666,
}

VERDICTS = ("close", "acceptable", "marginal", "nonconforming")


@dataclass(frozen=True)
class VerdictBands:
    """Upper MAD bounds (exclusive) for the close/acceptable/marginal bands."""

    close: float
    acceptable: float
    marginal: float

    def __post_init__(self):
        if not 0 <= self.close <= self.acceptable <= self.marginal:
            raise UsageError("verdict bands must satisfy 0 <= close <= acceptable <= marginal")

    def verdict(self, mad_value: float) -> str:
        if mad_value < self.close:
            return "close"
        if mad_value < self.acceptable:
            return "acceptable"
        if mad_value < self.marginal:
            return "marginal"
        return "nonconforming"


# Conventional forensic-accounting MAD bands; not derived from the data.
FIRST_DIGIT_BANDS = VerdictBands(0.006, 0.012, 0.015)
SECOND_DIGIT_BANDS = VerdictBands(0.008, 0.010, 0.012)


def default_bands(position: int) -> VerdictBands:
    return FIRST_DIGIT_BANDS if position == 1 else SECOND_DIGIT_BANDS


def verdict_rank(verdict: str) -> int:
    """0 for close up to 3 for nonconforming."""
    try:
        return VERDICTS.index(verdict)
    except ValueError:
        raise UsageError(f"unknown verdict band {verdict!r}") from None


@lru_cache(maxsize=None)
def expected_distribution(base: int = 10, position: int = 1) -> DigitDistribution:
    """Benford probabilities of each digit at ``position`` in ``base``.

    Position 1 uses log_b(1 + 1/d); position 2 marginalizes the joint
    first-two-digit law over every possible leading digit.
    """
    check_base_position(base, position)
    log_b = math.log(base)
    if position == 1:
        probs = {d: math.log1p(1 / d) / log_b for d in legal_digits(base, 1)}
    else:
        probs = {
            k: math.fsum(math.log1p(1 / (j * base + k)) for j in range(1, base)) / log_b
            for k in legal_digits(base, 2)
        }
    return DigitDistribution(base, position, probs)


def distribution_mean(dist) -> float:
    """Mean digit, sum of d * P(d). Accepts a DigitDistribution or a plain mapping."""
    probs = dist.probabilities if isinstance(dist, DigitDistribution) else dist
    return math.fsum(d * p for d, p in probs.items())


def _check_pair(a: DigitDistribution, b: DigitDistribution) -> None:
    if (a.base, a.position) != (b.base, b.position):
        raise UsageError(
            f"distributions differ: base {a.base} position {a.position} "
            f"vs base {b.base} position {b.position}"
        )


def mad(empirical: DigitDistribution, expected: DigitDistribution) -> float:
    """Mean absolute deviation over the legal digits."""
    _check_pair(empirical, expected)
    diffs = [abs(empirical[d] - expected[d]) for d in empirical.digits]
    return math.fsum(diffs) / len(diffs)


def chi_square(hist: DigitHistogram, expected: DigitDistribution) -> tuple[float, int]:
    """Pearson statistic of the counts against ``expected`` and its degrees of freedom.

    Digits with zero expected probability (only possible in degenerate
    bases) are skipped when their observed count is also zero.
    """
    if hist.n_included == 0:
        raise EmptyHistogramError("histogram has no contributing values")
    if (hist.base, hist.position) != (expected.base, expected.position):
        raise UsageError("histogram and expected distribution differ in base/position")
    n = hist.n_included
    terms = []
    for d, observed in hist.counts.items():
        e = n * expected[d]
        if e == 0:
            if observed:
                return math.inf, len(hist.counts) - 1
            continue
        terms.append((observed - e) ** 2 / e)
    return math.fsum(terms), len(hist.counts) - 1


@dataclass(frozen=True)
class ConformanceReport:
    empirical: DigitDistribution
    expected: DigitDistribution
    n_included: int
    n_excluded: int
    mad: float
    chi_square: float
    chi_square_df: int
    max_deviation_digit: int
    max_deviation: float
    empirical_mean: float
    expected_mean: float
    verdict: str
    bands: VerdictBands = field(default=FIRST_DIGIT_BANDS)

    @property
    def base(self) -> int:
        return self.expected.base

    @property
    def position(self) -> int:
        return self.expected.position


def max_deviation(empirical: DigitDistribution, expected: DigitDistribution) -> tuple[int, float]:
    """Digit with the largest absolute deviation; ties go to the smallest digit."""
    _check_pair(empirical, expected)
    best_digit, best = empirical.digits[0], -1.0
    for d in empirical.digits:
        dev = abs(empirical[d] - expected[d])
        if dev > best:
            best_digit, best = d, dev
    return best_digit, best


def conformance_report(hist: DigitHistogram, thresholds: VerdictBands | None = None) -> ConformanceReport:
    if thresholds is None:
        thresholds = default_bands(hist.position)
    empirical = normalize(hist)
    expected = expected_distribution(hist.base, hist.position)
    m = mad(empirical, expected)
    stat, df = chi_square(hist, expected)
    digit, dev = max_deviation(empirical, expected)
    return ConformanceReport(
        empirical=empirical,
        expected=expected,
        n_included=hist.n_included,
        n_excluded=hist.n_excluded,
        mad=m,
        chi_square=stat,
        chi_square_df=df,
        max_deviation_digit=digit,
        max_deviation=dev,
        empirical_mean=distribution_mean(empirical),
        expected_mean=distribution_mean(expected),
        verdict=thresholds.verdict(m),
        bands=thresholds,
    )
