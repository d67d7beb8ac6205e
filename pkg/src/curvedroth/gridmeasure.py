"""Piecewise-constant measures on the finest dyadic grid."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .dyadic import DepthError, DyadicInterval, DyadicSet, GridParams


class GridMeasure:
    """Nonnegative weight per finest cell, spread uniformly over the cell."""

    __slots__ = ("params", "weights")

    def __init__(self, params: GridParams, weights):
        w = np.array(weights, dtype=np.float64)
        if w.shape != (params.ncells,):
            raise ValueError(f"expected {params.ncells} weights, got shape {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        w.flags.writeable = False
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "weights", w)

    def __setattr__(self, name, value):
        raise AttributeError("GridMeasure is immutable")

    @classmethod
    def uniform(cls, params: GridParams, mass: float = 1.0) -> "GridMeasure":
        return cls(params, np.full(params.ncells, mass / params.ncells))

    @classmethod
    def on_set(cls, E: DyadicSet) -> "GridMeasure":
        """Normalized counting measure on the occupied cells."""
        if E.is_empty():
            raise ValueError("empty set")
        return cls(E.params, E.cells / E.count())

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def L(self) -> int:
        return self.params.L

    @property
    def width(self) -> float:
        return 1.0 / self.params.ncells

    @property
    def total(self) -> float:
        return math.fsum(self.weights)

    @property
    def density(self) -> np.ndarray:
        return self.weights * self.params.ncells

    def support(self) -> DyadicSet:
        return DyadicSet(self.params, self.weights > 0)

    def scaled(self, factor: float) -> "GridMeasure":
        return GridMeasure(self.params, self.weights * factor)

    def normalized(self) -> "GridMeasure":
        t = self.total
        if t <= 0:
            raise ValueError("zero total mass")
        return GridMeasure(self.params, self.weights / t)

    def level_masses(self, level: int) -> np.ndarray:
        if level > self.L:
            raise DepthError(f"level {level} below resolution {self.L}")
        return self.weights.reshape(1 << (self.N * level), -1).sum(axis=1)

    def mass_of(self, Q: DyadicInterval) -> float:
        lo, hi = Q.cell_range(self.L)
        return float(self.weights[lo:hi].sum())

    def restrict_and_rescale(self, Q: DyadicInterval) -> "GridMeasure":
        lo, hi = Q.cell_range(self.L)
        return GridMeasure(GridParams(self.N, self.L - Q.level), self.weights[lo:hi])

    def refined(self, extra_levels: int) -> "GridMeasure":
        """Same measure on a grid ``extra_levels`` deeper."""
        k = 1 << (self.N * extra_levels)
        w = np.repeat(self.weights / k, k)
        return GridMeasure(GridParams(self.N, self.L + extra_levels), w)

    def centers(self) -> np.ndarray:
        n = self.params.ncells
        return (np.arange(n) + 0.5) / n

    def fourier(self, xi) -> np.ndarray:
        """mu_hat(xi) = sum_c w_c exp(-2 pi i xi center_c) sinc(pi xi width), exactly."""
        xi = np.asarray(xi, dtype=np.float64)
        flat = xi.ravel()
        idx = np.flatnonzero(self.weights)
        c = self.centers()[idx]
        w = self.weights[idx]
        out = np.empty(flat.shape, dtype=np.complex128)
        chunk = max(1, 2_000_000 // max(1, idx.size))
        for a in range(0, flat.size, chunk):
            x = flat[a:a + chunk]
            out[a:a + chunk] = np.exp(-2j * np.pi * np.outer(x, c)) @ w
        out *= np.sinc(flat * self.width)
        return out.reshape(xi.shape)

    def fourier_grid(self, samples_per_unit: int, xi_max: float) -> tuple[np.ndarray, np.ndarray]:
        """mu_hat on xi = k / samples_per_unit, 0 <= xi <= xi_max, via one FFT.

        With spacing 1/r and cell width 2^{-NL}, the phase sum is an
        M-point DFT of the weights, M = r 2^{NL}, periodic in xi with period 2^{NL}.
        """
        r = int(samples_per_unit)
        n = self.params.ncells
        M = r * n
        K = int(np.floor(xi_max * r + 1e-9))
        spec = np.fft.fft(self.weights, M)
        k = np.arange(K + 1)
        xi = k / r
        phase = spec[k % M] * np.exp(-1j * np.pi * xi * self.width)
        return xi, phase * np.sinc(xi * self.width)

    def __repr__(self):
        return f"GridMeasure(N={self.N}, L={self.L}, total={self.total:.6g})"


def frostman_ratio(mu: GridMeasure, s: float) -> float:
    """max over dyadic Q of mu(Q) / len(Q)^s, levels 0..L."""
    best = 0.0
    for j in range(mu.L + 1):
        m = mu.level_masses(j)
        best = max(best, float(m.max()) * 2.0 ** (j * s))
    return best


def frostman_ratio_table(mu: GridMeasure, s: float) -> list[float]:
    return [float(mu.level_masses(j).max()) * 2.0 ** (j * s) for j in range(mu.L + 1)]


# --- measure file format -----------------------------------------------------

def format_measure(mu: GridMeasure) -> str:
    lines = [f"{mu.N},{mu.L},{mu.total:.17g}"]
    for i in np.flatnonzero(mu.weights):
        lines.append(f"{i},{mu.weights[i]:.17g}")
    return "\n".join(lines) + "\n"


def parse_measure(text: str) -> GridMeasure:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    N, L, _total = lines[0].split(",")
    params = GridParams(int(N), int(L))
    w = np.zeros(params.ncells)
    for ln in lines[1:]:
        i, v = ln.split(",")
        w[int(i)] = float(v)
    return GridMeasure(params, w)


def write_measure(path, mu: GridMeasure) -> None:
    Path(path).write_text(format_measure(mu), encoding="ascii")


def read_measure(path) -> GridMeasure:
    return parse_measure(Path(path).read_text(encoding="ascii"))
