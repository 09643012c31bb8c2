"""Counter-based random streams with reproducible substream derivation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class SeededStream:
    """A (master_seed, stream_index) pair naming one Philox stream.

    Streams with distinct indices under the same master seed are
    statistically independent and fully reproducible, so embarrassingly
    parallel work can derive one substream per task up front and evaluate
    tasks in any order without changing results.
    """

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = (self.master_seed & _MASK64, self.stream_index & _MASK64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "SeededStream":
        if index < 0:
            raise ValueError("substream index must be non-negative")
        mixed = (self.stream_index * _MIX + index + 1) & _MASK64
        return SeededStream(self.master_seed, mixed)
