"""Named, splittable random streams.

A stream is identified by a 64-bit key. Child keys are derived by mixing
the parent key with a label, so the randomness consumed at one point of a
recursion never depends on how much was consumed elsewhere.
"""
from __future__ import annotations

import random

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive(key: int, *labels: int) -> int:
    for label in labels:
        key = splitmix64(key ^ splitmix64(label & MASK64))
    return key


def named(seed: int, name: str) -> int:
    """Key for a top-level named sub-stream of ``seed``."""
    key = splitmix64(seed & MASK64)
    for ch in name.encode("ascii"):
        key = derive(key, ch)
    return key


def generator(key: int) -> random.Random:
    return random.Random(key)


GAMMA = 0x9E3779B97F4A7C15


def bernoulli_mask(key: int, positions: int, threshold: int) -> int:
    """Subset of the set bits of ``positions``, each kept iff its draw is below ``threshold``.

    Draws are successive splitmix64 outputs of the stream ``key``, so a bit is
    kept with probability ``threshold / 2^64``.
    """
    out = 0
    state = key
    while positions:
        low = positions & -positions
        positions ^= low
        state = (state + GAMMA) & MASK64
        z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        if z ^ (z >> 31) < threshold:
            out |= low
    return out


def threshold(p: float) -> int:
    """Integer cut-off for :func:`bernoulli_mask` realizing probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    return min(int(p * 2.0**64), 1 << 64)
