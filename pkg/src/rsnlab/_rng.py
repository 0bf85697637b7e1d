from __future__ import annotations

import numpy as np


def as_generator(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def chunk_generators(seed, total: int, chunk: int) -> list[tuple[int, np.random.Generator]]:
    """Split ``total`` draws into fixed-size chunks, each with its own stream.

    The chunking depends only on ``(seed, total, chunk)``, never on the number
    of workers, so results are reproducible for any ``--jobs`` value.
    """
    if isinstance(seed, np.random.Generator):
        ss = np.random.SeedSequence(int(seed.integers(0, 2**63 - 1)))
    elif isinstance(seed, np.random.SeedSequence):
        ss = seed
    else:
        ss = np.random.SeedSequence(seed)
    sizes = [chunk] * (total // chunk)
    if total % chunk:
        sizes.append(total % chunk)
    children = ss.spawn(len(sizes))
    return [(size, np.random.default_rng(child)) for size, child in zip(sizes, children)]
