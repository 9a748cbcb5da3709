"""Reproducible random streams.

Randomness flows through :class:`RngSpec`, a (seed, stream id) pair backed
by numpy's counter-based Philox generator.  The pair fully determines the
output, so results never depend on thread count or call interleaving;
independent sub-tasks (the four sub-run generators, per-seed Monte Carlo
repetitions, per-step shuffles) each get their own derived stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RngSpec"]

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """One splitmix64 round; standard 64-bit mixing constants."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RngSpec:
    """A named random stream: equal (seed, stream) means equal output."""

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream", int(self.stream) & _MASK64)

    def generator(self) -> np.random.Generator:
        """A fresh generator; repeated calls restart the same stream."""
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def derive(self, index: int) -> RngSpec:
        """A child stream for sub-task ``index``, same seed.

        The child id mixes (stream, index) through splitmix64 so nested
        derivations do not collide for any realistic workload.
        """
        mixed = _splitmix64(_splitmix64(self.stream) ^ (int(index) & _MASK64))
        return RngSpec(self.seed, mixed)
