"""Deterministic, platform-stable randomness.

Seeding uses :class:`random.Random` whose ``getrandbits`` output is the
only primitive consumed here, so identical seeds give identical results
everywhere.  Independent substreams are derived from a master seed with
SHA-256 over ``"<seed>:<label>"``; each trial of an experiment gets its
own substream and can be replayed in isolation.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(master: int, label) -> int:
    digest = hashlib.sha256(f"{master}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def make_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def rand_below(rng: random.Random, n: int) -> int:
    """Uniform integer in [0, n) by rejection sampling on getrandbits."""
    if n <= 0:
        raise ValueError("rand_below needs n >= 1")
    k = (n - 1).bit_length()
    if k == 0:
        return 0
    while True:
        r = rng.getrandbits(k)
        if r < n:
            return r


def shuffled(rng: random.Random, items) -> list:
    """Fisher-Yates shuffle built on rand_below (stable across platforms)."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rand_below(rng, i + 1)
        out[i], out[j] = out[j], out[i]
    return out
