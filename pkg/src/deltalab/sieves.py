"""Shared sieve utilities: primes, smallest prime factors, Mobius, tau,
and a segmented von Mangoldt window sum for large x.

Everything returns numpy arrays indexed by n (entry 0 unused where noted).
"""

from __future__ import annotations

import math
from typing import Iterator, Tuple

import numpy as np

#: Segment length for windowed sieves (2^22 entries per block).
SEGMENT = 1 << 22


def prime_mask(n: int) -> np.ndarray:
    """Boolean array of length n+1, True at primes."""
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def primes_up_to(n: int) -> np.ndarray:
    return np.flatnonzero(prime_mask(n)).astype(np.int64)


def smallest_prime_factor(n: int) -> np.ndarray:
    """spf[k] = smallest prime factor of k (spf[1] = 1, spf[0] = 0)."""
    spf = np.arange(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            sl[sl == np.arange(p * p, n + 1, p)] = p
    return spf


def mobius_array(n: int) -> np.ndarray:
    """mu[k] for k <= n via factorization along smallest prime factors."""
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    mask = prime_mask(n)
    for p in np.flatnonzero(mask):
        p = int(p)
        mu[p::p] *= -1
        sq = p * p
        if sq <= n:
            mu[sq::sq] = 0
    return mu


def tau_array(n: int) -> np.ndarray:
    """Divisor counts tau(k) for k <= n."""
    tau = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        tau[d::d] += 1
    return tau


def windows(lo: int, hi: int, width: int = SEGMENT) -> Iterator[Tuple[int, int]]:
    """Half-open [a, b) segments covering the half-open (lo, hi]."""
    a = lo + 1
    while a <= hi:
        b = min(a + width, hi + 1)
        yield a, b
        a = b


def von_mangoldt_window(lo: int, hi: int) -> Tuple[float, int]:
    """(sum of Lambda(n) for lo < n <= hi, count of primes in that range).

    Segmented: prime marks per 2^22-entry block; higher prime powers are
    enumerated directly (there are only O(sqrt(hi)) of them).
    """
    if hi <= lo:
        return 0.0, 0
    base = primes_up_to(math.isqrt(hi))
    log_terms = []
    prime_count = 0
    for a, b in windows(lo, hi):
        seg = np.ones(b - a, dtype=bool)
        if a <= 1 < b:
            seg[1 - a] = False
        if a <= 0 < b:
            seg[0 - a] = False
        for p in base:
            p = int(p)
            start = max(p * p, ((a + p - 1) // p) * p)
            if start < b:
                seg[start - a :: p] = False
        idx = np.flatnonzero(seg) + a
        prime_count += len(idx)
        if len(idx):
            log_terms.append(float(np.log(idx.astype(np.float64)).sum()))
    # Higher prime powers p^k with lo < p^k <= hi.
    for p in base:
        p = int(p)
        pk = p * p
        while pk <= hi:
            if pk > lo:
                log_terms.append(math.log(p))
            pk *= p
    return math.fsum(log_terms), prime_count
