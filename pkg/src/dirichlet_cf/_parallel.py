"""Deterministic sharding of Monte Carlo work across threads.

Shards have a fixed size and each gets its own child seed, so the result
depends on (seed, sample count) only, never on the number of workers.
``DIRICHLET_CF_THREADS`` caps the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")

SHARD_SIZE = 50_000


def max_workers() -> int:
    env = os.environ.get("DIRICHLET_CF_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cpus))
        except ValueError:
            pass
    return cpus


def shard_map(fn: Callable[[int, np.random.Generator], T], total: int, seed: int | None,
              shard_size: int = SHARD_SIZE) -> list[T]:
    """Run ``fn(count, rng)`` over shards covering ``total`` samples, in order."""
    if total <= 0:
        return []
    counts = [shard_size] * (total // shard_size)
    if total % shard_size:
        counts.append(total % shard_size)
    children = np.random.SeedSequence(seed).spawn(len(counts))
    rngs = [np.random.default_rng(c) for c in children]
    workers = min(max_workers(), len(counts))
    if workers == 1:
        return [fn(c, r) for c, r in zip(counts, rngs)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, counts, rngs))
