"""
Counter-based random streams.

A stream is a numpy Generator over Philox (4x64, 10 rounds) whose key is derived from
(master_seed, replica, draw, purpose). Streams never share state, so any assignment of streams to
threads reproduces the same numbers.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1


def purpose_tag(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8"))


def stream(
    master_seed: int, purpose: str, replica: int = 0, draw: int = 0
) -> np.random.Generator:
    """Independent generator for one (purpose, replica, draw) cell."""
    entropy = [master_seed & MASK64, replica, draw, purpose_tag(purpose)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class StreamFactory:
    """Binds a master seed so callers only name purposes and replica indices."""

    master_seed: int

    def __call__(
        self, purpose: str, replica: int = 0, draw: int = 0
    ) -> np.random.Generator:
        return stream(self.master_seed, purpose, replica, draw)

    def tag(self, purpose: str, replica: int = 0, draw: int = 0) -> str:
        return f"{self.master_seed}:{purpose}:{replica}:{draw}"


def chunk_bounds(total: int, chunk_size: int) -> list[tuple[int, int]]:
    """Fixed partition of range(total); independent of the worker count."""
    return [(lo, min(lo + chunk_size, total)) for lo in range(0, total, chunk_size)]
