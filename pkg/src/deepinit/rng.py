"""Seeded random source: polar Box-Muller normals and partial Fisher-Yates.

The uniform stream is numpy's PCG64 seeded through ``SeedSequence([a, b])``
from two non-negative integers. Every random quantity in the library is
derived from :meth:`RngState.uniform` / :meth:`RngState.uniform_array`, so a
``(a, b)`` pair fully determines a run.
"""

from __future__ import annotations

import math

import numpy as np


class RngState:
    """Single-owner random state. Not thread-safe."""

    def __init__(self, seed_a: int = 10, seed_b: int = 0):
        self.seed = (int(seed_a), int(seed_b))
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(self.seed))))
        self.cached_normal = 0.0
        self.use_cached = False
        self.n_uniform = 0  # uniforms consumed so far

    def uniform(self) -> float:
        """One U[0, 1) draw."""
        self.n_uniform += 1
        return float(self._gen.random())

    def uniform_array(self, n: int) -> np.ndarray:
        """``n`` consecutive U[0, 1) draws from the same stream."""
        self.n_uniform += n
        return self._gen.random(n)

    def rand_normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        """``mean + std * z`` with ``z`` from the polar Box-Muller method.

        Each accepted pair yields two deviates; the second is cached and
        returned, without drawing, by the next call.
        """
        if self.use_cached:
            self.use_cached = False
            return mean + self.cached_normal * std
        while True:
            x1 = 2.0 * self.uniform() - 1.0
            x2 = 2.0 * self.uniform() - 1.0
            w = x1 * x1 + x2 * x2
            # w == 0 would divide by zero; it is never accepted
            if 0.0 < w < 1.0:
                v = math.sqrt((-2.0 * math.log(w)) / w)
                self.cached_normal = x2 * v
                self.use_cached = True
                return mean + x1 * v * std

    def rand_perm(self, m: int, n: int) -> list[int]:
        """``m`` distinct integers from ``1..n``, sorted ascending.

        Runs ``m`` steps of Fisher-Yates over ``[1, ..., n]`` and sorts the
        prefix.
        """
        if m < 0 or n < 0 or m > n:
            raise ValueError(f"rand_perm needs 0 <= m <= n, got m={m}, n={n}")
        a = list(range(1, n + 1))
        for i in range(m):
            j = i + math.floor(self.uniform() * (n - i))
            if j == n:
                j = n - 1
            a[i], a[j] = a[j], a[i]
        return sorted(a[:m])

    def permutation(self, n: int) -> list[int]:
        """Full Fisher-Yates shuffle of ``0..n-1`` (zero-based, unsorted)."""
        a = list(range(n))
        for i in range(n):
            j = i + math.floor(self.uniform() * (n - i))
            if j == n:
                j = n - 1
            a[i], a[j] = a[j], a[i]
        return a
