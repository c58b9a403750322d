"""Benchmark driver: deterministic inputs, backend agreement, report shape."""

from __future__ import annotations

import pytest

from streamfp import kernels
from streamfp.bench import _random_words, run_bench


def test_random_words_deterministic_and_in_range():
    a = _random_words(123, 12, 1000)
    b = _random_words(123, 12, 1000)
    assert (a == b).all()
    assert int(a.max()) < 2 ** 12
    c = _random_words(124, 12, 1000)
    assert (a != c).any()


def test_run_bench_compares_backends():
    report = run_bench(ks=(8,), mib=1, seed=2, backend="both")
    entry = report["results"]["8"]
    assert entry["backends_agree"] is True
    expected = {"numpy"} | ({"numba"} if kernels.NUMBA_AVAILABLE else set())
    assert set(entry["backends"]) == expected
    for stats in entry["backends"].values():
        assert stats["segments_measured"] > 0
        assert stats["seconds"] > 0


def test_run_bench_validates_k():
    with pytest.raises(ValueError):
        run_bench(ks=(0,), mib=1, seed=1)
    with pytest.raises(ValueError):
        run_bench(ks=(65,), mib=1, seed=1)
