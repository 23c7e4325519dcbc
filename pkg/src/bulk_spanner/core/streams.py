import zlib
from typing import Union

import numpy as np


def substream(seed: Union[int, np.random.SeedSequence], name: str) -> np.random.Generator:
    """
    Independent generator for one named stage of a run.

    The same (seed, name) always yields the same stream, and streams with
    different names do not overlap.
    """
    if isinstance(seed, np.random.SeedSequence):
        entropy = seed.entropy
    else:
        entropy = int(seed)
    sequence = np.random.SeedSequence(entropy, spawn_key=(zlib.crc32(name.encode('utf-8')),))
    return np.random.default_rng(sequence)


def child_seed(rng: np.random.Generator) -> int:
    """Draw a plain integer seed from a generator, for handing to a sub-stage."""
    return int(rng.integers(0, 2**63 - 1))
