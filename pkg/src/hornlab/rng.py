"""Reproducible random streams.

A stream is identified by ``(seed, stream_id)``. The bit generator is
Philox (counter based), keyed through :class:`numpy.random.SeedSequence`
with ``stream_id`` in the spawn key, so distinct ids give independent
streams and the same pair always reproduces the same draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RngStream"]

_U64 = 2**64


@dataclass(frozen=True)
class RngStream:
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) < _U64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def generator(self):
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def shard(self, index):
        """Generator for shard ``index`` of this stream (parallel Monte Carlo)."""
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, int(index)))
        return np.random.Generator(np.random.Philox(ss))

    def with_stream(self, stream_id):
        return RngStream(self.seed, stream_id)
