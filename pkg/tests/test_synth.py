import pytest
from hypothesis import given, settings, strategies as st

from benfordnet.benford import conformance_report
from benfordnet.digits import digit_histogram
from benfordnet.errors import UsageError
from benfordnet.synth import (
    GeneratorSpec,
    gen_padded,
    gen_planted,
    gen_uniform_mixture,
    generate,
    planted_count,
    synthetic_profiles,
    to_csv,
)

# Frozen from tests/oracles.py: seed 7, M = 100000, s_max = 10**7.
MIXTURE_MAD = 0.006488610062297235
PLANTED_MAD = 0.06041750087830559
PADDED_MAD = 0.03902000096355973
SECOND_ZERO_BEFORE = 0.12243905480391545
SECOND_ZERO_AFTER = 0.54492


def first_mad(values):
    return conformance_report(digit_histogram(values)).mad


def test_s_max_one():
    values = gen_uniform_mixture(GeneratorSpec(count=500, s_max=1, seed=3))
    assert set(values) == {1}
    assert digit_histogram(values).counts[1] == 500


def test_single_digit_support():
    values = gen_uniform_mixture(GeneratorSpec(count=20000, s_max=9, s_law="uniform", seed=3))
    assert set(values) <= set(range(1, 10))
    hist = digit_histogram(values)
    assert all(hist.counts[d] == values.count(d) for d in range(1, 10))


def test_mixture_mad_frozen():
    assert first_mad(gen_uniform_mixture(GeneratorSpec(seed=7))) == pytest.approx(MIXTURE_MAD, abs=1e-12)


def test_planted_and_padded_frozen():
    assert first_mad(generate(GeneratorSpec("planted", seed=7))) == pytest.approx(PLANTED_MAD, abs=1e-12)
    assert first_mad(generate(GeneratorSpec("padded", seed=7))) == pytest.approx(PADDED_MAD, abs=1e-12)


def test_padding_collapses_second_digit():
    base = gen_uniform_mixture(GeneratorSpec(seed=7))
    full = gen_padded(base, 100, 1.0, 7)

    def zero_mass(values):
        h = digit_histogram(values, 10, 2)
        return h.counts[0] / h.n_included

    assert zero_mass(base) == pytest.approx(SECOND_ZERO_BEFORE, abs=1e-12)
    assert zero_mass(full) == pytest.approx(SECOND_ZERO_AFTER, abs=1e-12)


def test_planted_examples():
    base = list(range(1, 101))
    assert gen_planted(base, 0.0, 777, 1) == base
    assert gen_planted(base, 1.0, 777, 1) == [777] * 100
    assert digit_histogram([777] * 100).counts[7] == 100


def test_planted_raises_mad():
    base = gen_uniform_mixture(GeneratorSpec(count=50000, seed=11))
    assert first_mad(gen_planted(base, 0.3, 500000, 11)) > first_mad(base)


def test_padded_examples():
    assert gen_padded([123, 456], 100, 1.0, 0) == [200, 500]
    assert gen_padded([123, 456], 100, 0.0, 0) == [123, 456]
    assert gen_padded([300, 1], 100, 1.0, 0) == [300, 100]


@pytest.mark.parametrize("length, f, k", [(10, 0.25, 3), (10, 0.35, 4), (3, 0.5, 2), (100000, 0.3, 30000)])
def test_planted_count_rounds_half_up(length, f, k):
    assert planted_count(length, f) == k


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=10**6), max_size=300),
       st.floats(min_value=0, max_value=1), st.integers(min_value=0, max_value=2**64 - 1))
def test_planted_changes_exact_count(values, f, seed):
    planted_value = 10**7 + 1
    out = gen_planted(values, f, planted_value, seed)
    assert sum(v == planted_value for v in out) == planted_count(len(values), f)
    assert out == gen_planted(values, f, planted_value, seed)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=10**9), max_size=300),
       st.integers(min_value=1, max_value=1000), st.floats(min_value=0, max_value=1),
       st.integers(min_value=0, max_value=2**64 - 1))
def test_padded_never_decreases(values, step, p, seed):
    out = gen_padded(values, step, p, seed)
    assert all(b >= a for a, b in zip(values, out))
    assert all(b == a or b % step == 0 for a, b in zip(values, out))
    assert gen_padded(values, 1, p, seed) == values
    assert gen_padded(values, step, 0.0, seed) == values


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=10**12), st.sampled_from(["log_uniform", "uniform"]),
       st.integers(min_value=0, max_value=2**64 - 1))
def test_mixture_range_and_determinism(s_max, law, seed):
    spec = GeneratorSpec(count=500, s_max=s_max, s_law=law, seed=seed)
    values = gen_uniform_mixture(spec)
    assert len(values) == 500
    assert all(1 <= v <= s_max for v in values)
    assert values == gen_uniform_mixture(spec)


@pytest.mark.parametrize("kwargs", [
    dict(model="pareto"), dict(count=0), dict(s_max=0), dict(s_law="normal"),
    dict(fraction=1.5), dict(probability=-0.1), dict(step=0), dict(planted_value=0),
    dict(seed=-1),
])
def test_spec_validation(kwargs):
    with pytest.raises(UsageError):
        GeneratorSpec(**kwargs)


def test_profiles_and_csv():
    cols = synthetic_profiles(50, seed=1)
    assert set(cols) == {"follower", "following"}
    text = to_csv(cols)
    lines = text.splitlines()
    assert lines[0] == "id,follower,following"
    assert len(lines) == 51
    assert synthetic_profiles(50, seed=1) == cols
