"""Seeded parallel streams and mean/stderr merging shared by the MC estimators."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class Moments:
    """Count, sum and sum of squares of one batch of i.i.d. draws."""

    n: int
    total: float
    total_sq: float

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        values = np.asarray(values, dtype=float)
        return cls(int(values.size), float(values.sum()), float(np.square(values).sum()))

    def __add__(self, other: "Moments") -> "Moments":
        return Moments(self.n + other.n, self.total + other.total, self.total_sq + other.total_sq)


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    samples: int

    def __iter__(self):
        yield self.mean
        yield self.stderr

    def within(self, exact: float, sigmas: float = 4.0) -> bool:
        # a zero-variance estimator still carries rounding error
        return abs(self.mean - exact) <= sigmas * self.stderr + 1e-12 * abs(exact)


def merge(parts: Sequence[Moments]) -> Estimate:
    """Count-weighted mean and pooled standard error of the mean."""
    acc = Moments(0, 0.0, 0.0)
    for p in parts:
        acc = acc + p
    if acc.n == 0:
        return Estimate(0.0, math.inf, 0)
    mean = acc.total / acc.n
    if acc.n < 2:
        return Estimate(mean, math.inf, acc.n)
    var = max(acc.total_sq - acc.n * mean * mean, 0.0) / (acc.n - 1)
    return Estimate(mean, math.sqrt(var / acc.n), acc.n)


def split_counts(samples: int, streams: int) -> list[int]:
    base, extra = divmod(samples, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


def spawn_rngs(seed: int, streams: int) -> list[np.random.Generator]:
    """Independent PCG64 generators derived from one 64-bit seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(streams)]


def run_streams(worker: Callable, seed: int, samples: int, streams: int = 1, jobs: int = 1,
                args: tuple = ()) -> Estimate:
    """Run ``worker(seed_sequence, count, *args) -> Moments`` on each stream and merge.

    The result depends on ``seed`` and ``streams`` only, never on ``jobs``.
    """
    if streams < 1:
        raise ValueError("need at least one stream")
    seqs = np.random.SeedSequence(seed).spawn(streams)
    counts = split_counts(samples, streams)
    if jobs <= 1 or streams == 1:
        parts = [worker(s, c, *args) for s, c in zip(seqs, counts)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(worker, seqs, counts, *[[a] * streams for a in args]))
    return merge(parts)
