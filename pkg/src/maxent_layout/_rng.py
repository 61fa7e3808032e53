"""Seed derivation for independent, reproducible random sub-streams.

Every stochastic step takes its generator from ``derive_rng(seed, tag, level)``
so that, e.g., the prolongation stream of level 3 never depends on how many
numbers label propagation consumed on level 2.
"""

import numpy as np

COARSEN = 1
PROLONG = 2
JITTER = 3
PERTURB = 4
GUARD = 5
FALLBACK = 6


def derive_rng(seed, tag, level=0):
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tag), int(level)))
    return np.random.Generator(np.random.PCG64(ss))


def derive_salt(seed, tag=GUARD):
    """63-bit integer salt for the hash-based coincidence guard."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tag),))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
