"""Synthetic accumulation processes.

``uniform_mixture`` draws each value uniformly from {1..S} with S itself
random, the generating model under which first digits follow Benford's
law. ``planted`` and ``padded`` perturb a base set the way fake-follower
farms and vanity friend-padding would.

All randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence([seed, stream])``; stream 0 draws the mixture, 1 the
planted positions, 2 the padding coin flips.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass

import numpy as np

from .errors import UsageError

MODELS = ("uniform_mixture", "planted", "padded")
S_LAWS = ("log_uniform", "uniform")
MAX_S = 2**62

_MIXTURE, _PLANTED, _PADDED = 0, 1, 2


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def _check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise UsageError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic model.

    planted and padded models perturb a uniform-mixture base set drawn
    from the same ``count``, ``s_max``, ``s_law`` and ``seed``.
    """

    model: str = "uniform_mixture"
    count: int = 100_000
    seed: int = 0
    s_max: int = 10**7
    s_law: str = "log_uniform"
    fraction: float = 0.3
    planted_value: int = 500_000
    step: int = 100
    probability: float = 0.8

    def __post_init__(self):
        if self.model not in MODELS:
            raise UsageError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.s_law not in S_LAWS:
            raise UsageError(f"unknown s_law {self.s_law!r}; expected one of {S_LAWS}")
        _check_seed(self.seed)
        if self.count < 1:
            raise UsageError("count must be >= 1")
        if not 1 <= self.s_max <= MAX_S:
            raise UsageError(f"s_max must lie in [1, 2**62], got {self.s_max}")
        if not 0 <= self.fraction <= 1:
            raise UsageError("fraction must lie in [0, 1]")
        if not 0 <= self.probability <= 1:
            raise UsageError("probability must lie in [0, 1]")
        if self.planted_value < 1:
            raise UsageError("planted_value must be positive")
        if self.step < 1:
            raise UsageError("step must be >= 1")

    def as_dict(self) -> dict:
        return asdict(self)


def _mixture(count: int, s_max: int, s_law: str, rng: np.random.Generator) -> list[int]:
    if s_law == "log_uniform":
        u = rng.random(count)
        s = np.rint(np.exp(u * math.log(s_max))).astype(np.int64)
        s = np.clip(s, 1, s_max)
    else:
        s = rng.integers(1, s_max, size=count, endpoint=True, dtype=np.int64)
    return rng.integers(1, s, endpoint=True, dtype=np.int64).tolist()


def gen_uniform_mixture(spec: GeneratorSpec) -> list[int]:
    """``spec.count`` values, each uniform on {1..S} with S drawn by ``spec.s_law``.

    log_uniform draws S = round(s_max ** U) with U uniform on [0, 1);
    uniform draws S uniformly from {1..s_max}.
    """
    return _mixture(spec.count, spec.s_max, spec.s_law, _rng(spec.seed, _MIXTURE))


def planted_count(length: int, fraction: float) -> int:
    """Number of positions overwritten: fraction * length rounded half up."""
    return math.floor(fraction * length + 0.5)


def gen_planted(base_values: Sequence[int], fraction: float, planted_value: int,
                seed: int) -> list[int]:
    """Overwrite a uniformly chosen ``planted_count`` positions with ``planted_value``."""
    if not 0 <= fraction <= 1:
        raise UsageError("fraction must lie in [0, 1]")
    _check_seed(seed)
    out = list(base_values)
    k = planted_count(len(out), fraction)
    if k:
        for i in _rng(seed, _PLANTED).choice(len(out), size=k, replace=False).tolist():
            out[i] = planted_value
    return out


def gen_padded(base_values: Sequence[int], step: int, probability: float,
               seed: int) -> list[int]:
    """Round each value up to a multiple of ``step`` with the given probability."""
    if step < 1:
        raise UsageError("step must be >= 1")
    if not 0 <= probability <= 1:
        raise UsageError("probability must lie in [0, 1]")
    _check_seed(seed)
    out = list(base_values)
    if probability == 0 or step == 1 or not out:
        return out
    hit = _rng(seed, _PADDED).random(len(out)) < probability
    for i in np.flatnonzero(hit).tolist():
        out[i] = -(-out[i] // step) * step
    return out


def generate(spec: GeneratorSpec) -> list[int]:
    values = gen_uniform_mixture(spec)
    if spec.model == "planted":
        return gen_planted(values, spec.fraction, spec.planted_value, spec.seed)
    if spec.model == "padded":
        return gen_padded(values, spec.step, spec.probability, spec.seed)
    return values


def synthetic_profiles(count: int, seed: int, follower_s_max: int = 10**7,
                       following_s_max: int = 10**5) -> dict[str, list[int]]:
    """Two independent heavy-tailed metrics shaped like a follower/following table."""
    _check_seed(seed)
    seq = np.random.SeedSequence([seed, 99])
    f_rng, g_rng = (np.random.Generator(np.random.PCG64(s)) for s in seq.spawn(2))
    follower = _mixture(count, follower_s_max, "log_uniform", f_rng)
    following = _mixture(count, following_s_max, "log_uniform", g_rng)
    return {"follower": follower, "following": following}


def to_csv(columns: dict[str, Sequence[int]], ids: bool = True) -> str:
    """Render metric columns in the dataset CSV schema."""
    names = list(columns)
    n = len(columns[names[0]]) if names else 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow((["id"] if ids else []) + names)
    for i in range(n):
        w.writerow(([f"p{i:07d}"] if ids else []) + [columns[m][i] for m in names])
    return buf.getvalue()
