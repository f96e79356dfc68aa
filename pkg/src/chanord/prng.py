"""Splittable counter-based pseudo-randomness.

Every draw is a pure function of (seed, counter-words): hashing the words
with blake2b gives a stream that can be split arbitrarily without shared
state, so independently generated objects never correlate and every test
is exactly reproducible.
"""

from __future__ import annotations

import hashlib


def counter_word(seed: int, *counters: int) -> int:
    """Uniform 64-bit word determined by the seed and counter tuple."""
    payload = ("%d:" % seed + ",".join("%d" % c for c in counters)).encode()
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "big")


def counter_int(seed: int, *counters: int, bound: int) -> int:
    """Uniform integer in [0, bound] (inclusive), counter-addressed."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    return counter_word(seed, *counters) % (bound + 1)
