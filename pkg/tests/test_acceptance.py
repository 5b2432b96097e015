"""Exit criteria. Each test records one PASS/FAIL line, printed in the
terminal summary (see conftest.py)."""

import json
import math
import random
import time
from contextlib import contextmanager

import pytest

from benfordnet.benford import (
    PRINTED_FIRST_DIGIT,
    PRINTED_SECOND_DIGIT,
    conformance_report,
    distribution_mean,
    expected_distribution,
)
from benfordnet.dataset import ProfileDataset, SelectionSpec, replicate_analysis, select
from benfordnet.digits import digit_histogram, significant_digit
from benfordnet.report import averaged_document, expected_document, render_report
from benfordnet.synth import GeneratorSpec, generate, gen_uniform_mixture, synthetic_profiles

pytestmark = pytest.mark.acceptance

RESULTS = []

# Frozen from tests/oracles.py (independent re-implementation, string digits).
MIXTURE_MAD = 0.006488610062297235
PLANTED_MAD = 0.06041750087830559
PADDED_MAD = 0.03902000096355973
SORTED_TOP_MAD = 0.0816959901443832
RANDOM_AVERAGED_MAD = 0.006030001927119474
ORACLE_TOL = 1e-12


@contextmanager
def criterion(number, text):
    try:
        yield
    except BaseException:
        RESULTS.append(f"criterion {number}: FAIL  {text}")
        raise
    RESULTS.append(f"criterion {number}: PASS  {text}")


def _best_time(fn, repeats=50):
    best = math.inf
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def test_1_first_digit_row():
    with criterion(1, "first-digit row matches the published 3-decimal values; < 1 ms"):
        dist = expected_distribution(10, 1)
        assert {d: round(p, 3) for d, p in dist.probabilities.items()} == PRINTED_FIRST_DIGIT
        uncached = expected_distribution.__wrapped__
        assert _best_time(lambda: uncached(10, 1)) < 1e-3


def test_2_second_digit_row():
    with criterion(2, "second-digit row matches the published 3-decimal values"):
        dist = expected_distribution(10, 2)
        assert {d: round(p, 3) for d, p in dist.probabilities.items()} == PRINTED_SECOND_DIGIT


def test_3_means():
    with criterion(3, "means: printed 3.441, exact 3.4402 and 4.1874, 4.186 vs 4.187 surfaced"):
        assert round(distribution_mean(PRINTED_FIRST_DIGIT), 3) == 3.441
        assert abs(distribution_mean(expected_distribution(10, 1)) - 3.4402) <= 1e-4
        assert abs(distribution_mean(expected_distribution(10, 2)) - 4.1874) <= 1e-4
        summary = expected_document(10, 2).summary
        assert summary["printed_row_mean"] == 4.186
        assert summary["published_mean"] == 4.187
        assert summary["published_mean_matches_row"] is False
        table = render_report(expected_document(10, 2), "table").decode()
        assert "4.186" in table and "4.187" in table and "differs" in table


def test_4_base_two():
    with criterion(4, "base 2 puts probability exactly 1.0 on digit 1"):
        assert dict(expected_distribution(2, 1).probabilities) == {1: 1.0}


def test_5_conforming_generator():
    with criterion(5, "uniform mixture M=100000 log-uniform s_max=1e7 seed 7: MAD < 0.01 (oracle value); < 5 s"):
        t = time.perf_counter()
        values = gen_uniform_mixture(GeneratorSpec(count=100_000, s_max=10**7, s_law="log_uniform", seed=7))
        m = conformance_report(digit_histogram(values)).mad
        elapsed = time.perf_counter() - t
        assert m < 0.01
        assert abs(m - MIXTURE_MAD) <= ORACLE_TOL
        assert elapsed < 5


def test_6_separation():
    with criterion(6, "planted (f=0.3, v=500000) and padded (step 100, p=0.8) MAD >= 2x mixture MAD"):
        def m(spec):
            return conformance_report(digit_histogram(generate(spec))).mad
        mix = m(GeneratorSpec("uniform_mixture", seed=7))
        planted = m(GeneratorSpec("planted", seed=7, fraction=0.3, planted_value=500_000))
        padded = m(GeneratorSpec("padded", seed=7, step=100, probability=0.8))
        assert abs(mix - MIXTURE_MAD) <= ORACLE_TOL
        assert abs(planted - PLANTED_MAD) <= ORACLE_TOL
        assert abs(padded - PADDED_MAD) <= ORACLE_TOL
        assert planted >= 2 * mix
        assert padded >= 2 * mix


def test_7_sorted_vs_random():
    with criterion(7, "486250-record fixture: random averaged (n=20000, k=10) MAD <= sorted_top MAD; < 10 s"):
        t = time.perf_counter()
        ds = ProfileDataset.from_columns(synthetic_profiles(486_250, seed=2014))
        rand = replicate_analysis(ds, SelectionSpec("random", "follower", 20_000, seed=42, replicates=10))
        top = replicate_analysis(ds, SelectionSpec("sorted_top", "follower", 20_000))
        elapsed = time.perf_counter() - t
        assert abs(rand.mad - RANDOM_AVERAGED_MAD) <= ORACLE_TOL
        assert abs(top.mad - SORTED_TOP_MAD) <= ORACLE_TOL
        assert rand.mad <= top.mad
        assert elapsed < 10


def test_8_protocol_invariants():
    with criterion(8, "replicate determinism, k=1 equals single analysis, n=size collapse, normalization"):
        values = gen_uniform_mixture(GeneratorSpec(count=30_000, seed=8))
        ds = ProfileDataset.from_columns({"value": values})
        spec = SelectionSpec("random", "value", 5000, seed=123, replicates=10)
        docs = [render_report(averaged_document(replicate_analysis(ds, spec), {}, spec.as_dict()), "json")
                for _ in range(2)]
        assert docs[0] == docs[1]

        one = SelectionSpec("random", "value", 5000, seed=123, replicates=1)
        single = conformance_report(digit_histogram(select(ds, one)[0]))
        avg = replicate_analysis(ds, one)
        assert dict(avg.per_digit_mean) == dict(single.empirical.probabilities)
        assert avg.mad == single.mad

        full = replicate_analysis(ds, SelectionSpec("random", "value", len(ds), seed=1, replicates=5))
        for d in full.expected.digits:
            assert full.per_digit_min[d] == full.per_digit_mean[d] == full.per_digit_max[d]

        doc = json.loads(docs[0])
        emitted = [[r["empirical"] for r in doc["rows"]], [r["expected"] for r in doc["rows"]]]
        emitted += [r["empirical"] for r in doc["summary"]["per_replicate"]]
        for base in (2, 10, 16, 36):
            for pos in (1, 2):
                emitted.append([r["expected"] for r in expected_document(base, pos).rows])
        assert all(abs(math.fsum(e) - 1) <= 1e-9 for e in emitted)


def test_9_digit_oracle():
    with criterion(9, "integer extraction agrees with string rendering on 1e5 values per base 2/8/10/16"):
        rnd = random.Random(20140709)
        fmt = {2: "b", 8: "o", 10: "d", 16: "x"}
        for base, code in fmt.items():
            for _ in range(100_000):
                v = rnd.getrandbits(rnd.randint(1, 64))
                text = format(v, code)
                first = int(text[0], 16) if v else None
                second = int(text[1], 16) if v and len(text) > 1 else None
                assert significant_digit(v, base, 1) == first
                assert significant_digit(v, base, 2) == second
