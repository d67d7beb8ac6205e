"""Dyadic Hausdorff content, good cubes and Frostman measures.

Lengths follow the D*[N] convention: a level-j cube has length 2^{-j}, so its
cost in a cover is 2^{-j s}.  Covers use cubes of levels J..L only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dyadic import DyadicInterval, DyadicSet
from .gridmeasure import GridMeasure

TIE_TOL = 1e-12


class ContentQuery(NamedTuple):
    s: float
    J: int = 0


def cube_cost(level: int, s: float) -> float:
    return 2.0 ** (-level * s)


def _child_sum(values: np.ndarray, b: int) -> np.ndarray:
    # left-to-right over siblings; the brute-force oracle sums in this order
    v = values.reshape(-1, b)
    out = v[:, 0].copy()
    for i in range(1, b):
        out += v[:, i]
    return out


@dataclass(frozen=True)
class ContentTable:
    """Per-level DP values; ``values[j][k]`` is the content of E ∩ Q_{j,k}."""

    E: DyadicSet
    s: float
    J: int
    values: list
    occupied: list
    take: list  # take[j][k]: optimal cover uses Q_{j,k} itself

    @property
    def value(self) -> float:
        return float(self.values[0][0])

    def ratios(self, level: int) -> np.ndarray:
        return self.values[level] / cube_cost(level, self.s)

    def cover(self, Q: DyadicInterval | None = None) -> list[DyadicInterval]:
        """Optimal cover of E (or of E ∩ Q), as maximal cubes in index order."""
        N = self.E.N
        start = [(0, 0)] if Q is None else [(Q.level, Q.index)]
        out = []
        stack = list(reversed(start))
        while stack:
            j, k = stack.pop()
            if not self.occupied[j][k]:
                continue
            if self.take[j][k]:
                out.append(DyadicInterval(j, k, N))
                continue
            b = 1 << N
            stack.extend((j + 1, k * b + i) for i in reversed(range(b)))
        return out


def content_table(E: DyadicSet, q: ContentQuery | tuple) -> ContentTable:
    s, J = ContentQuery(*q)
    if s < 0:
        raise ValueError("s must be nonnegative")
    L, N = E.L, E.N
    if not 0 <= J <= L:
        raise ValueError(f"J must lie in [0, {L}]")
    b = 1 << N
    values = [None] * (L + 1)
    occupied = [None] * (L + 1)
    take = [None] * (L + 1)
    occ = E.cells.copy()
    cost = cube_cost(L, s)
    values[L] = np.where(occ, cost, 0.0)
    occupied[L] = occ
    take[L] = occ.copy()
    for j in range(L - 1, -1, -1):
        occ = occupied[j + 1].reshape(-1, b).any(axis=1)
        split = _child_sum(values[j + 1], b)
        if j >= J:
            own = np.where(occ, cube_cost(j, s), 0.0)
            # exact min for the value; the cover prefers the coarser cube on near-ties
            values[j] = np.minimum(own, split)
            take[j] = occ & (own <= split + TIE_TOL)
        else:
            values[j] = split
            take[j] = np.zeros_like(occ)
        occupied[j] = occ
    return ContentTable(E, float(s), int(J), values, occupied, take)


def content(E: DyadicSet, q: ContentQuery | tuple) -> float:
    """Exact dyadic content H^s_{D*_J, inf}(E) at resolution L."""
    return content_table(E, q).value


def good_cube(E: DyadicSet, s: float, delta: float, J: int = 0,
              max_level: int | None = None) -> DyadicInterval | None:
    """Cube Q of level J..max_level with content(E ∩ Q) >= (1 - delta) len(Q)^s.

    Among qualifying cubes the largest ratio content/len^s wins; ratios
    within 1e-12 tie and are broken by smallest level, then smallest index.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    table = content_table(E, (s, J))
    top = E.L if max_level is None else min(max_level, E.L)
    best = None
    for j in range(J, top + 1):
        r = table.ratios(j)
        ok = np.flatnonzero(r >= 1.0 - delta)
        if ok.size == 0:
            continue
        k = int(ok[np.argmax(r[ok])])
        cand = (float(r[k]), j, k)
        if best is None or cand[0] > best[0] + TIE_TOL:
            best = cand
    if best is None:
        return None
    return DyadicInterval(best[1], best[2], E.N)


def ratio_table(E: DyadicSet, s: float, J: int = 0) -> list[tuple[int, float, float]]:
    """(level, max ratio, min nonzero ratio) per level; used by the CLI."""
    table = content_table(E, (s, J))
    rows = []
    for j in range(E.L + 1):
        r = table.ratios(j)[table.occupied[j]]
        if r.size:
            rows.append((j, float(r.max()), float(r.min())))
        else:
            rows.append((j, 0.0, 0.0))
    return rows


def frostman_weights(occ: np.ndarray, N: int, level0: int, s: float) -> np.ndarray:
    """Frostman construction on the subtree of a level-``level0`` cube.

    ``occ`` lists the finest cells of that subtree.  Leaves start at
    len^s; then, going up, any cube heavier than len(Q)^s is scaled down
    to exactly len(Q)^s.
    """
    occ = np.asarray(occ, dtype=bool)
    depth = int(round(np.log2(occ.size))) // N
    if (1 << (N * depth)) != occ.size:
        raise ValueError("occupancy length is not a power of 2^N")
    L = level0 + depth
    w = np.where(occ, cube_cost(L, s), 0.0)
    for d in range(depth - 1, -1, -1):
        cap = cube_cost(level0 + d, s)
        blocks = w.reshape(1 << (N * d), -1)
        mass = blocks.sum(axis=1)
        over = mass > cap
        if over.any():
            blocks[over] *= (cap / mass[over])[:, None]
    return w


def frostman_measure(E: DyadicSet, s: float) -> GridMeasure:
    """nu on the occupied cells with nu(Q) <= len(Q)^s and ||nu|| >= content(E, s)."""
    if E.is_empty():
        raise ValueError("Frostman measure of an empty set")
    w = frostman_weights(E.cells, E.N, 0, s)
    # in exact arithmetic the total equals the content; round the other way
    # by a few ulps where the rescaling lost them
    floor = content(E, (s, 0))
    for _ in range(64):
        if math.fsum(w) >= floor:
            break
        w = w * (1.0 + 2.0 ** -52)
    return GridMeasure(E.params, w)
