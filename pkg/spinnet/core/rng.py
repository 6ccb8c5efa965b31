"""
Reproducible random streams for disorder sampling.

Every realization owns a stream derived from ``(base_seed, indices)``; the
bit generator is the counter-based Philox, so a stream depends only on its
key and never on how many other streams were drawn before it.
"""
from typing import Sequence

import numpy as np

RandomStream = np.random.Generator

RNG_ALGORITHM = "numpy.random.Philox(4x64-10)+SeedSequence"


def substream(base_seed: int, indices: Sequence[int]) -> RandomStream:
    """
    Derive an independent generator for a tuple of indices.

    Args:
        base_seed: 64-bit root seed
        indices: Position of the stream, e.g. (scale_index, realization_index)

    Returns:
        Generator whose draws depend only on (base_seed, indices)
    """
    sequence = np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=tuple(int(i) for i in indices)
    )
    return np.random.Generator(np.random.Philox(sequence))
