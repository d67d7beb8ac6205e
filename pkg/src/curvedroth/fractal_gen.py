"""Generators of dyadic test sets.

Random sets use SplitMix64 as a counter-based stream so that any
implementation can reproduce them bit for bit::

    state_i = (seed + i * 0x9E3779B97F4A7C15) mod 2**64      i = 1, 2, ...
    z = state_i
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    z = z ^ (z >> 31)
    u_i = (z >> 11) * 2**-53                                 uniform in [0, 1)

``random_branching`` consumes the stream level by level, top down.  At each
level it visits the children of the surviving parents in increasing index
order and keeps child c iff ``u < p`` for the next draw u.  An empty outcome
restarts the construction from the root, continuing the same stream.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .dyadic import DyadicSet, GridParams

GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start+1 .. start+count`` of the stream as uint64."""
    i = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK) + i * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    z = splitmix64(seed, start, count)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def full_interval(params: GridParams) -> DyadicSet:
    return DyadicSet(params, np.ones(params.ncells, dtype=bool))


def self_similar(params: GridParams, keep) -> DyadicSet:
    """Cantor-type set keeping the listed children at every step.

    ``keep`` is either one collection of child indices, used at every step,
    or a sequence of such collections used cyclically (step 0 first).
    """
    keep = list(keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    if all(isinstance(k, (int, np.integer)) for k in keep):
        schedule = [sorted(set(int(k) for k in keep))]
    else:
        schedule = [sorted(set(int(k) for k in step)) for step in keep]
    b = params.branching
    for step in schedule:
        if not step:
            raise ValueError("each step must keep at least one child")
        bad = [k for k in step if not 0 <= k < b]
        if bad:
            raise ValueError(f"invalid child index {bad[0]} for N={params.N}")

    occ = np.ones(1, dtype=bool)
    for level in range(params.L):
        mask = np.zeros(b, dtype=bool)
        mask[schedule[level % len(schedule)]] = True
        occ = (occ[:, None] & mask[None, :]).ravel()
    return DyadicSet(params, occ)


def random_branching(params: GridParams, p: float, seed: int) -> DyadicSet:
    """Percolation set: each child of a survivor survives with probability p."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    b = params.branching
    drawn = 0
    while True:
        occ = np.ones(1, dtype=bool)
        for _ in range(params.L):
            alive = np.flatnonzero(occ)
            u = uniforms(seed, drawn, alive.size * b)
            drawn += alive.size * b
            nxt = np.zeros(occ.size * b, dtype=bool)
            kids = (alive[:, None] * b + np.arange(b)[None, :]).ravel()
            nxt[kids] = u < p
            occ = nxt
            if not occ.any():
                break
        if occ.any():
            return DyadicSet(params, occ)


def similarity_dimension(N: int, keep_count: int) -> float:
    return float(np.log2(keep_count) / N)
