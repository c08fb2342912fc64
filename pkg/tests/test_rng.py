import numpy as np
import pytest

from wavechaos import rng


def _kernel(rng_, size):
    return rng_.random(size)


def test_operation_key_is_stable_and_sensitive():
    a = rng.operation_key("x", n=1, t=0.5)
    assert a == rng.operation_key("x", t=0.5, n=1)
    assert a != rng.operation_key("x", n=2, t=0.5)


def test_streams_are_independent_of_worker_count():
    r1 = rng.run_chunks(_kernel, 200_000, 7, 11, chunk_size=10_000, threads=1)
    r4 = rng.run_chunks(_kernel, 200_000, 7, 11, chunk_size=10_000, threads=4)
    assert r1 == r4
    assert abs(r1.mean - 0.5) < 4 * r1.stderr


def test_seed_range():
    with pytest.raises(ValueError):
        rng.stream(-1, 0, 0)
    rng.stream(2 ** 64 - 1, 0, 0)


def test_chunk_plan():
    assert rng.chunk_plan(25, 10) == [10, 10, 5]
    assert rng.chunk_plan(0, 10) == []
    with pytest.raises(ValueError):
        rng.run_chunks(_kernel, 0, 1, 1)


def test_merge_matches_numpy():
    w = []

    def kernel(r, size):
        x = r.normal(size=size)
        w.append(x)
        return x

    res = rng.run_chunks(kernel, 50_000, 3, 5, chunk_size=7_000, threads=1)
    allw = np.concatenate(w)
    assert np.isclose(res.mean, allw.mean(), rtol=1e-12)
    assert np.isclose(res.stderr, allw.std(ddof=1) / np.sqrt(allw.size), rtol=1e-10)
    assert rng.check_variance_decay(res)


def test_variance_decay_detects_heavy_tails():
    res = rng.MCResult(1.0, 1.0, 100, (1.0, 0.99, 1.0))
    assert not rng.check_variance_decay(res)


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv(rng.THREADS_ENV, "3")
    assert rng.default_threads() == 3
    monkeypatch.setenv(rng.THREADS_ENV, "junk")
    assert rng.default_threads() == 1
