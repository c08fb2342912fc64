"""Counter-based random streams and an ordered, chunked Monte Carlo driver.

Each chunk of samples draws from its own Philox stream keyed by
``(seed, operation key, chunk index)``.  Chunk results are reduced in chunk
order, so estimates are bit-identical for any worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import json
import math
import os
import zlib

import numpy as np

THREADS_ENV = "WAVECHAOS_THREADS"
DEFAULT_CHUNK = 1 << 16
_MASK64 = (1 << 64) - 1


def default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def operation_key(name, **params):
    """Stable 32-bit key for an operation and its parameters."""
    blob = json.dumps([name, params], sort_keys=True, default=float)
    return zlib.crc32(blob.encode("utf-8"))


def stream(seed, op_key, chunk):
    if not 0 <= int(seed) <= _MASK64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(seed) >> 32, int(op_key), int(chunk)])
    return np.random.Generator(np.random.Philox(ss))


def chunk_plan(n_samples, chunk_size=DEFAULT_CHUNK):
    n_samples = int(n_samples)
    full, rest = divmod(n_samples, chunk_size)
    sizes = [chunk_size] * full
    if rest:
        sizes.append(rest)
    return sizes


@dataclass(frozen=True)
class ChunkStats:
    count: int
    mean: float
    m2: float


def _merge(a, b):
    # Chan et al. pairwise update; applied strictly left to right.
    n = a.count + b.count
    if n == 0:
        return a
    delta = b.mean - a.mean
    mean = a.mean + delta * b.count / n
    m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / n
    return ChunkStats(n, mean, m2)


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    samples: int
    partial_stderr: tuple  # stderr after 1/4, 1/2 and all of the chunks

    @property
    def variance(self):
        return self.stderr ** 2 * self.samples


def run_chunks(kernel, n_samples, seed, op_key, chunk_size=DEFAULT_CHUNK, threads=None):
    """Evaluate ``kernel(rng, size) -> weights`` chunk by chunk and reduce in order."""
    sizes = chunk_plan(n_samples, chunk_size)
    if not sizes:
        raise ValueError("need at least one sample")

    def one(i):
        w = np.asarray(kernel(stream(seed, op_key, i), sizes[i]), dtype=float)
        mu = float(w.mean())
        return ChunkStats(w.size, mu, float(((w - mu) ** 2).sum()))

    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(sizes) == 1:
        stats = [one(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(one, range(len(sizes))))

    checkpoints = sorted({max(1, len(stats) // 4), max(1, len(stats) // 2), len(stats)})
    total = ChunkStats(0, 0.0, 0.0)
    partial = []
    for i, s in enumerate(stats, start=1):
        total = _merge(total, s)
        if i in checkpoints:
            partial.append(_stderr(total))
    return MCResult(total.mean, _stderr(total), total.count, tuple(partial))


def _stderr(s):
    if s.count < 2:
        return math.inf
    return math.sqrt(s.m2 / (s.count - 1) / s.count)


def check_variance_decay(result, min_ratio=1.5):
    """True when stderr shrank by at least ``min_ratio`` from N/4 to N samples.

    Finite-variance estimators give a ratio close to 2.
    """
    if len(result.partial_stderr) < 3:
        return True
    first, last = result.partial_stderr[0], result.partial_stderr[-1]
    if last == 0.0:
        return True
    return first / last >= min_ratio
