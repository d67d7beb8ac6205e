"""Dyadic interval system with block exponent N, occupancy sets and the set file format.

A level-j interval has physical width 2**(-j*N) but is assigned the length
2**(-j).  Endpoints and lengths are exact :class:`fractions.Fraction` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class DepthError(ValueError):
    """Requested level lies below the finest resolution."""


class DomainError(ValueError):
    """Point outside the domain of a map."""


@dataclass(frozen=True)
class GridParams:
    N: int
    L: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        # L == 0 only arises for rescaled pieces of a finer set
        if int(self.L) != self.L or self.L < 0:
            raise ValueError(f"L must be a nonnegative integer, got {self.L!r}")

    @property
    def ncells(self) -> int:
        return 1 << (self.N * self.L)

    @property
    def cell_width(self) -> Fraction:
        return Fraction(1, self.ncells)

    @property
    def branching(self) -> int:
        return 1 << self.N


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The half-open interval [k 2^{-jN}, (k+1) 2^{-jN})."""

    level: int
    index: int
    N: int = 1

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if not 0 <= self.index < (1 << (self.N * self.level)):
            raise ValueError(f"index {self.index} out of range at level {self.level}")

    @property
    def width(self) -> Fraction:
        return Fraction(1, 1 << (self.N * self.level))

    @property
    def left(self) -> Fraction:
        return self.index * self.width

    @property
    def right(self) -> Fraction:
        return (self.index + 1) * self.width

    def contains(self, other: "DyadicInterval") -> bool:
        if other.N != self.N or other.level < self.level:
            return False
        return other.index >> (self.N * (other.level - self.level)) == self.index

    def cell_range(self, L: int) -> tuple[int, int]:
        """Finest-cell index range [lo, hi) covered at depth ``L``."""
        if self.level > L:
            raise DepthError(f"level {self.level} below resolution {L}")
        shift = self.N * (L - self.level)
        return self.index << shift, (self.index + 1) << shift


def root(N: int = 1) -> DyadicInterval:
    return DyadicInterval(0, 0, N)


def length_of(Q: DyadicInterval) -> Fraction:
    return Fraction(1, 1 << Q.level)


def children(Q: DyadicInterval, steps: int = 1, L: int | None = None) -> list[DyadicInterval]:
    """All descendants ``steps`` levels below ``Q``, in index order."""
    if steps < 1:
        raise ValueError("steps must be positive")
    if L is not None and Q.level + steps > L:
        raise DepthError(f"level {Q.level}+{steps} exceeds resolution L={L}")
    shift = Q.N * steps
    base = Q.index << shift
    return [DyadicInterval(Q.level + steps, base + i, Q.N) for i in range(1 << shift)]


def rescale_to_unit(Q: DyadicInterval, x):
    """T_Q(x) = 2^{jN}(x - left(Q)); exact for Fraction/int input."""
    left, right = Q.left, Q.right
    if isinstance(x, (int, Fraction)):
        if not left <= x <= right:
            raise DomainError(f"{x} outside closure of {Q}")
        return (x - left) * (1 << (Q.N * Q.level))
    if not float(left) <= x <= float(right):
        raise DomainError(f"{x} outside closure of {Q}")
    return (x - float(left)) * float(1 << (Q.N * Q.level))


def rescale_from_unit(Q: DyadicInterval, y):
    if isinstance(y, (int, Fraction)):
        return y * Q.width + Q.left
    return y * float(Q.width) + float(Q.left)


class DyadicSet:
    """Union of occupied finest cells of the depth-L grid."""

    __slots__ = ("params", "cells")

    def __init__(self, params: GridParams, cells):
        cells = np.asarray(cells, dtype=bool).copy()
        if cells.shape != (params.ncells,):
            raise ValueError(f"expected {params.ncells} cells, got shape {cells.shape}")
        cells.flags.writeable = False
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "cells", cells)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicSet is immutable")

    @classmethod
    def from_indices(cls, params: GridParams, indices: Iterable[int]) -> "DyadicSet":
        cells = np.zeros(params.ncells, dtype=bool)
        cells[list(indices)] = True
        return cls(params, cells)

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def L(self) -> int:
        return self.params.L

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.cells)

    def is_empty(self) -> bool:
        return not self.cells.any()

    def count(self) -> int:
        return int(self.cells.sum())

    def occupancy(self, level: int) -> np.ndarray:
        """Boolean occupancy of the level-``level`` intervals."""
        if level > self.L:
            raise DepthError(f"level {level} below resolution {self.L}")
        return self.cells.reshape(1 << (self.N * level), -1).any(axis=1)

    def restrict(self, Q: DyadicInterval) -> "DyadicSet":
        """E ∩ Q on the same grid."""
        lo, hi = Q.cell_range(self.L)
        cells = np.zeros_like(self.cells)
        cells[lo:hi] = self.cells[lo:hi]
        return DyadicSet(self.params, cells)

    def union(self, other: "DyadicSet") -> "DyadicSet":
        if other.params != self.params:
            raise ValueError("grid mismatch")
        return DyadicSet(self.params, self.cells | other.cells)

    def issubset(self, other: "DyadicSet") -> bool:
        return other.params == self.params and not np.any(self.cells & ~other.cells)

    def contains_point(self, p: float) -> bool:
        """Membership of ``p`` in the closure of the occupied cells."""
        n = self.params.ncells
        if p < 0 or p > 1:
            return False
        y = p * n
        k = int(np.floor(y))
        if k < n and self.cells[k]:
            return True
        return k == y and k >= 1 and bool(self.cells[k - 1])

    def __eq__(self, other):
        if not isinstance(other, DyadicSet):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.params, self.cells.tobytes()))

    def __repr__(self):
        return f"DyadicSet(N={self.N}, L={self.L}, occupied={self.count()}/{self.params.ncells})"


def restrict_and_rescale(E: DyadicSet, Q: DyadicInterval) -> DyadicSet:
    """T_Q(E ∩ Q) as a set of depth L - level(Q) on [0, 1]."""
    if Q.N != E.N:
        raise ValueError("block exponent mismatch")
    lo, hi = Q.cell_range(E.L)
    return DyadicSet(GridParams(E.N, E.L - Q.level), E.cells[lo:hi])


# --- set file format ---------------------------------------------------------

def runs(cells: Sequence[bool]) -> list[tuple[int, int]]:
    cells = np.asarray(cells, dtype=bool)
    if not cells.any():
        return []
    padded = np.concatenate(([False], cells, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    starts, ends = edges[::2], edges[1::2]
    return [(int(a), int(b - a)) for a, b in zip(starts, ends)]


def format_set(E: DyadicSet) -> str:
    body = ",".join(f"{a}:{n}" for a, n in runs(E.cells))
    return f"N={E.N} L={E.L}\n{body}\n"


def parse_set(text: str) -> DyadicSet:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty set file")
    fields = dict(tok.split("=", 1) for tok in lines[0].split())
    try:
        params = GridParams(int(fields["N"]), int(fields["L"]))
    except KeyError as exc:
        raise ValueError(f"bad header line: {lines[0]!r}") from exc
    cells = np.zeros(params.ncells, dtype=bool)
    body = lines[1].strip() if len(lines) > 1 else ""
    if body:
        for item in body.split(","):
            start, length = (int(v) for v in item.split(":"))
            if start < 0 or length < 1 or start + length > params.ncells:
                raise ValueError(f"run {item!r} outside grid")
            cells[start:start + length] = True
    return DyadicSet(params, cells)


def write_set(path, E: DyadicSet) -> None:
    Path(path).write_text(format_set(E), encoding="ascii")


def read_set(path) -> DyadicSet:
    return parse_set(Path(path).read_text(encoding="ascii"))
