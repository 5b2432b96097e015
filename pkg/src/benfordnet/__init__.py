"""Benford first-digit forensics for social-network connectivity counts."""

__version__ = "0.1.0"

from .benford import (  # noqa: E402
    ConformanceReport,
    VerdictBands,
    chi_square,
    conformance_report,
    distribution_mean,
    expected_distribution,
    mad,
)
from .dataset import (  # noqa: E402
    AveragedDistribution,
    ProfileDataset,
    SelectionSpec,
    load,
    replicate_analysis,
    select,
)
from .digits import (  # noqa: E402
    DigitDistribution,
    DigitHistogram,
    digit_histogram,
    normalize,
    significant_digit,
)
from .errors import BenfordError, DataError, EmptyHistogramError, SchemaError, UsageError  # noqa: E402
from .synth import GeneratorSpec, gen_padded, gen_planted, gen_uniform_mixture  # noqa: E402
