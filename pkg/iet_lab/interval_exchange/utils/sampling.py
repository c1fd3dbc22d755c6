from __future__ import annotations

import numpy as np

DYADIC_BITS = 30


def sample_stream(seed: int, stream_id: int) -> np.random.Generator:
    """

    Counter-based generator for one named stream. The same (seed, stream_id) always
    yields the same numbers, independent of how the work is split across processes.

    """

    seed_sequence = np.random.SeedSequence([seed, stream_id])
    return np.random.Generator(np.random.Philox(seed_sequence))


def dyadic_numerators(
    rng: np.random.Generator, count: int, bits: int = DYADIC_BITS
) -> np.ndarray:
    """
    Numerators k of uniform points k / 2^bits in [0, 1).
    """

    return rng.integers(0, 2**bits, size=count, dtype=np.int64)


def sample_pairs(
    seed: int, count: int, bits: int = DYADIC_BITS
) -> list[tuple[int, int]]:
    """
    Pair i comes from stream i, so a sample does not depend on the total count.
    """

    pairs = []
    for sample_id in range(count):
        x, y = dyadic_numerators(sample_stream(seed, sample_id), 2, bits)
        pairs.append((int(x), int(y)))
    return pairs
