"""Brute-force search for triples {x, x - t, x - gamma_lam(t)} in a dyadic set.

Points belong to E when they lie in the closure of the union of occupied
cells.  Candidate x and x - t run over the half-cell lattice k w / 2 (cell
endpoints and centers); t is either the dyadic ladder 2^k w or every lattice
step m w / 2 with m >= 2 ('exhaustive').  A witness needs t >= w and must
not fit inside a single closed finest cell; at finite resolution such
triples cannot be told apart from t = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .dyadic import DyadicSet


@dataclass(frozen=True)
class PatternWitness:
    x: float
    t: float
    lam: float
    points: tuple
    cells: tuple
    separation: float

    def as_row(self) -> dict:
        p1, p2, p3 = self.points
        return {"x": self.x, "t": self.t, "lambda": self.lam, "p1": p1, "p2": p2, "p3": p3,
                "separation": self.separation}


def closure_mask(E: DyadicSet, p) -> np.ndarray:
    """Vectorized membership of points p in the closure of E."""
    p = np.asarray(p, dtype=np.float64)
    n = E.params.ncells
    occ = E.cells
    y = p * n
    inside = (p >= 0.0) & (p <= 1.0)
    k = np.clip(np.floor(y).astype(np.int64), 0, n - 1)
    left = np.clip(k - 1, 0, n - 1)
    on_edge = (y == np.floor(y)) & (y > 0)
    # cell floor(y) holds p; at an interior endpoint the left neighbour does too
    hit = occ[k] & (y < n) | on_edge & occ[np.where(y >= n, n - 1, left)]
    return inside & hit


def single_cell(n: int, pts) -> np.ndarray:
    """True where the points (stacked on the first axis) share one closed cell of width 1/n."""
    lo = np.min(pts, axis=0)
    hi = np.max(pts, axis=0)
    k = np.floor(lo * n)
    return hi <= (k + 1) / n


def host_cell(E: DyadicSet, p: float) -> int:
    n = E.params.ncells
    y = p * n
    k = min(int(np.floor(y)), n - 1)
    if 0 <= k < n and E.cells[k] and y < n:
        return k
    return k - 1 if y == np.floor(y) and k >= 1 else k


def default_lambdas(E: DyadicSet) -> list[float]:
    return [float(2 ** (j * E.N)) for j in range(E.L + 1)]


def t_grid(E: DyadicSet, mode: str = "dyadic") -> np.ndarray:
    w = 1.0 / E.params.ncells
    if mode == "dyadic":
        return w * 2.0 ** np.arange(E.N * E.L + 1)
    if mode == "exhaustive":
        return 0.5 * w * np.arange(2, 2 * E.params.ncells + 1)
    raise ValueError(f"unknown t grid {mode!r}")


def _witness(E: DyadicSet, curve: Curve, x: float, t: float, lam: float) -> PatternWitness:
    g = curve.scaled(lam)
    pts = (x, x - t, x - float(g(t)))
    sep = min(abs(pts[0] - pts[1]), abs(pts[0] - pts[2]), abs(pts[1] - pts[2]))
    return PatternWitness(x, t, lam, pts, tuple(host_cell(E, p) for p in pts), sep)


def find_patterns(E: DyadicSet, curve: Curve, lambdas=None, max_results: int = 1,
                  t_mode: str = "dyadic") -> list[PatternWitness]:
    """Witnesses in ascending (x, t, lambda) order, at most ``max_results``."""
    if E.is_empty():
        raise ValueError("E is empty")
    lambdas = default_lambdas(E) if lambdas is None else [float(v) for v in lambdas]
    n = E.params.ncells
    xs = 0.5 * np.arange(2 * n + 1) / n
    xs = xs[closure_mask(E, xs)]
    ts = t_grid(E, t_mode)
    # gamma_lam(t) per (t, lam); pairs with lam t outside the curve's domain are masked
    G = np.zeros((ts.size, len(lambdas)))
    valid = np.zeros(G.shape, dtype=bool)
    for j, lam in enumerate(lambdas):
        g = curve.scaled(lam)
        ok = g.in_domain(ts)
        G[ok, j] = g(ts[ok])
        valid[:, j] = ok
    out: list[PatternWitness] = []
    block = max(1, 4_000_000 // max(1, G.size))
    for a in range(0, xs.size, block):
        xb = xs[a:a + block]
        second = closure_mask(E, xb[:, None] - ts[None, :])
        third = closure_mask(E, xb[:, None, None] - G[None, :, :]) & valid[None]
        X = np.broadcast_to(xb[:, None, None], third.shape)
        P2 = np.broadcast_to((xb[:, None] - ts[None, :])[:, :, None], third.shape)
        P3 = np.broadcast_to(xb[:, None, None] - G[None, :, :], third.shape)
        flat = single_cell(n, np.stack((X, P2, P3)))
        hits = np.argwhere(second[:, :, None] & third & ~flat)  # already (x, t, lam) ascending
        for i, k, j in hits[:max_results - len(out)]:
            out.append(_witness(E, curve, float(xb[i]), float(ts[k]), lambdas[j]))
        if len(out) >= max_results:
            break
    return out


def verify_witness(E: DyadicSet, w: PatternWitness, curve: Curve) -> bool:
    """Recompute the triple from (x, t, lambda) and check membership and t >= one cell."""
    if w.t < 1.0 / E.params.ncells:
        return False
    g = curve.scaled(w.lam)
    if not bool(g.in_domain(w.t)):
        return False
    pts = np.array([w.x, w.x - w.t, w.x - float(g(w.t))])
    if single_cell(E.params.ncells, pts):
        return False
    return bool(np.all(closure_mask(E, pts)))
