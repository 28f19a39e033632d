"""Counter-based random streams.

All seeded simulations in this package derive their randomness from Philox
keyed on ``(seed, stream_index)``.  A stream is a pure function of the seed
and its index, so per-trial results do not depend on execution order and
transcripts are portable across platforms.
"""

from __future__ import annotations

import numpy as np

_MAX_SEED = 2**64


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Return the generator for stream ``index`` of the given seed."""
    if not 0 <= seed < _MAX_SEED:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    if index < 0:
        raise ValueError("stream index must be non-negative")
    # Philox accepts a full 128-bit key: low word = seed, high word = index.
    return np.random.Generator(np.random.Philox(key=seed + (index << 64)))


def round_uniforms(seed: int, n_rounds: int, per_round: int) -> np.ndarray:
    """Uniform randomness for ``n_rounds`` protocol rounds.

    Returns an (n_rounds, per_round) array drawn in one fixed-order pass from
    stream 0 of ``seed``; row ``i`` is the entire randomness budget of round
    ``i``.  Consumers may process rounds in any order or in parallel and still
    produce identical transcripts.
    """
    return substream(seed, 0).random((n_rounds, per_round))
