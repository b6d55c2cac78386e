"""Sieve helpers shared by the prime-counting and selection code."""

from __future__ import annotations

import numpy as np


def primes_upto(limit: int) -> np.ndarray:
    """All primes p <= limit, ascending (Eratosthenes on a bool array)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for i in range(3, int(limit ** 0.5) + 1, 2):
        if sieve[i]:
            sieve[i * i :: 2 * i] = False
    return np.flatnonzero(sieve).astype(np.int64)
