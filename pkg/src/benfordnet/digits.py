"""Exact significant-digit extraction and digit histograms.

Digits are found with integer arithmetic only: the number of digits of a
value is located by bisecting a cached table of powers of the base, so the
result is exact for integers of any size.
"""

from __future__ import annotations

import math
import threading
from bisect import bisect_right
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType

from .errors import DataError, EmptyHistogramError, UsageError

MAX_BASE = 36
POSITIONS = (1, 2)

_powers: dict[int, list[int]] = {}
_powers_lock = threading.Lock()


def check_base_position(base: int, position: int) -> None:
    if isinstance(base, bool) or not isinstance(base, int) or not 2 <= base <= MAX_BASE:
        raise UsageError(f"base must be an integer in [2, {MAX_BASE}], got {base!r}")
    if position not in POSITIONS:
        raise UsageError(f"position must be 1 or 2, got {position!r}")


def legal_digits(base: int, position: int) -> tuple[int, ...]:
    """Digits that can occur at ``position`` in ``base``."""
    check_base_position(base, position)
    return tuple(range(1 if position == 1 else 0, base))


def _power_table(base: int, value: int) -> list[int]:
    table = _powers.get(base)
    if table is None or table[-1] <= value:
        with _powers_lock:
            table = list(_powers.get(base, [1]))
            while table[-1] <= value:
                table.append(table[-1] * base)
            _powers[base] = table
    return table


def significant_digit(value: int, base: int = 10, position: int = 1) -> int | None:
    """Return the digit of ``value`` at ``position`` (1 = leading) in ``base``.

    Returns None when the value has no digit there: zero has no leading
    digit and values below ``base`` have no second digit.

    >>> significant_digit(54353496)
    5
    >>> significant_digit(2428730, 10, 2)
    4
    >>> significant_digit(0) is None
    True
    """
    check_base_position(base, position)
    if value < 0:
        raise DataError(f"negative value {value}")
    if value == 0:
        return None
    powers = _power_table(base, value)
    ndigits = bisect_right(powers, value)
    if position == 1:
        return value // powers[ndigits - 1]
    if ndigits < 2:
        return None
    return (value // powers[ndigits - 2]) % base


@dataclass(frozen=True)
class DigitHistogram:
    """Per-digit counts for one digit position in one base."""

    base: int
    position: int
    counts: Mapping[int, int]
    n_included: int
    n_excluded: int

    def __post_init__(self):
        check_base_position(self.base, self.position)
        counts = dict(self.counts)
        digits = legal_digits(self.base, self.position)
        if set(counts) != set(digits):
            raise UsageError("histogram keys must be exactly the legal digits")
        if any(c < 0 for c in counts.values()):
            raise DataError("histogram counts must be nonnegative")
        if sum(counts.values()) != self.n_included:
            raise DataError("histogram counts do not sum to n_included")
        object.__setattr__(
            self, "counts", MappingProxyType({d: counts[d] for d in digits})
        )

    @property
    def n_values(self) -> int:
        return self.n_included + self.n_excluded

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(self.counts)

    @classmethod
    def from_counts(cls, counts: Mapping[int, int], base: int = 10, position: int = 1,
                    n_excluded: int = 0) -> DigitHistogram:
        """Build a histogram from a partial mapping; missing digits count zero."""
        full = {d: int(counts.get(d, 0)) for d in legal_digits(base, position)}
        extra = set(counts) - set(full)
        if extra:
            raise UsageError(f"illegal digits for base {base} position {position}: {sorted(extra)}")
        return cls(base, position, full, sum(full.values()), n_excluded)


@dataclass(frozen=True)
class DigitDistribution:
    """Normalized per-digit probabilities, empirical or theoretical."""

    base: int
    position: int
    probabilities: Mapping[int, float]

    def __post_init__(self):
        check_base_position(self.base, self.position)
        probs = dict(self.probabilities)
        digits = legal_digits(self.base, self.position)
        if set(probs) != set(digits):
            raise UsageError("distribution keys must be exactly the legal digits")
        if any(p < 0 for p in probs.values()):
            raise DataError("probabilities must be nonnegative")
        object.__setattr__(
            self, "probabilities", MappingProxyType({d: float(probs[d]) for d in digits})
        )

    def __getitem__(self, digit: int) -> float:
        return self.probabilities[digit]

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(self.probabilities)

    def total(self) -> float:
        return math.fsum(self.probabilities.values())


def digit_histogram(values: Iterable[int], base: int = 10, position: int = 1) -> DigitHistogram:
    """Count the digit at ``position`` over ``values``.

    Zeros (and, for position 2, single-digit values) have no digit at the
    position and are tallied in ``n_excluded``. Negative values raise a
    DataError naming the offending index.
    """
    check_base_position(base, position)
    counts = dict.fromkeys(legal_digits(base, position), 0)
    excluded = 0
    for i, v in enumerate(values):
        v = int(v)
        if v < 0:
            raise DataError(f"negative connectivity count {v}", index=i)
        d = significant_digit(v, base, position)
        if d is None:
            excluded += 1
        else:
            counts[d] += 1
    return DigitHistogram(base, position, counts, sum(counts.values()), excluded)


def normalize(hist: DigitHistogram) -> DigitDistribution:
    if hist.n_included == 0:
        raise EmptyHistogramError("histogram has no contributing values")
    n = hist.n_included
    return DigitDistribution(
        hist.base, hist.position, {d: c / n for d, c in hist.counts.items()}
    )
