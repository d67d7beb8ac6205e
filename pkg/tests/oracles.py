"""Brute-force oracles that share no code paths with the routines they check."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

# --- dyadic covers -------------------------------------------------------------


def _tree(N: int, L: int):
    """Nodes as (level, index) in level order, with parent and children tables."""
    nodes = [(j, k) for j in range(L + 1) for k in range(1 << (N * j))]
    pos = {q: i for i, q in enumerate(nodes)}
    kids = [[pos[(j + 1, (k << N) + c)] for c in range(1 << N)] if j < L else []
            for j, k in nodes]
    return nodes, pos, kids


@lru_cache(maxsize=None)
def antichains(N: int, L: int) -> np.ndarray:
    """Every antichain of the depth-L tree (the empty one included), as a bool matrix."""
    nodes, pos, kids = _tree(N, L)

    def rec(i):
        out = [frozenset([i])]
        combos = [frozenset()]
        for c in kids[i]:
            combos = [a | b for a in combos for b in rec_cache[c]]
        return out + combos

    rec_cache = {}
    for i in reversed(range(len(nodes))):
        rec_cache[i] = rec(i)
    members = rec_cache[0]
    M = np.zeros((len(members), len(nodes)), dtype=bool)
    for r, a in enumerate(members):
        M[r, list(a)] = True
    return M


def cover_minimum(cells, N: int, L: int, s: float, J: int = 0) -> float:
    """Minimum cost over all antichains of levels >= J that cover every occupied leaf.

    The cost of an antichain is accumulated bottom-up, summing siblings left
    to right, so the floating-point result of the optimal cover is
    reproduced bit for bit.
    """
    nodes, pos, kids = _tree(N, L)
    M = antichains(N, L)
    levels = np.array([j for j, _ in nodes])
    M = M[~np.any(M[:, levels < J], axis=1)]
    cells = np.asarray(cells, dtype=bool)
    # coverage: each occupied leaf has itself or an ancestor in the antichain
    covered = np.ones(M.shape[0], dtype=bool)
    for leaf in np.flatnonzero(cells):
        chain = [pos[(L - d, leaf >> (N * d))] for d in range(L + 1)]
        covered &= M[:, chain].any(axis=1)
    M = M[covered]
    cost = [None] * len(nodes)
    for i in reversed(range(len(nodes))):
        j, _ = nodes[i]
        own = 2.0 ** (-j * s)
        if kids[i]:
            acc = cost[kids[i][0]].copy()
            for c in kids[i][1:]:
                acc = acc + cost[c]
        else:
            acc = np.zeros(M.shape[0])
        cost[i] = np.where(M[:, i], own, acc)
    return float(cost[0].min())


# --- Frostman bound -------------------------------------------------------------


def max_cube_ratio(weights, N: int, L: int, s: float) -> float:
    """max over all dyadic cubes of mass / len^s by explicit per-cube slicing."""
    w = np.asarray(weights, dtype=np.float64)
    best = 0.0
    for j in range(L + 1):
        size = 1 << (N * (L - j))
        for k in range(1 << (N * j)):
            best = max(best, float(w[k * size:(k + 1) * size].sum()) * 2.0 ** (j * s))
    return best


def max_cube_excess(weights, N: int, L: int, s: float) -> float:
    """max over all dyadic cubes of mass - len^s."""
    w = np.asarray(weights, dtype=np.float64)
    best = -np.inf
    for j in range(L + 1):
        size = 1 << (N * (L - j))
        for k in range(1 << (N * j)):
            best = max(best, float(w[k * size:(k + 1) * size].sum()) - 2.0 ** (-j * s))
    return best


# --- Riesz energy ---------------------------------------------------------------


def riesz_midpoint(weights, t: float, refine: int = 4) -> float:
    """Midpoint double sum over sub-cells with the diagonal excluded."""
    w = np.repeat(np.asarray(weights, dtype=np.float64) / refine, refine)
    n = w.size
    x = (np.arange(n) + 0.5) / n
    diff = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(w @ (diff ** -t) @ w)


def riesz_extrapolated(weights, t: float, refine: int = 4) -> float:
    """Midpoint sums at refinements r, 2r, 4r, Richardson-combined to cancel
    the h^(1-t) and h^(2-t) defects left by the dropped diagonal."""
    m = [riesz_midpoint(weights, t, refine * 2 ** i) for i in range(3)]
    for p in (1.0 - t, 2.0 - t):
        r = 2.0 ** p
        m = [(r * b - a) / (r - 1.0) for a, b in zip(m, m[1:])]
    return m[0]


# --- patterns -------------------------------------------------------------------


def closed_intervals(cells) -> tuple[np.ndarray, np.ndarray]:
    """Maximal runs of occupied cells as closed intervals [a, b]."""
    cells = np.asarray(cells, dtype=bool)
    n = cells.size
    starts, ends = [], []
    k = 0
    while k < n:
        if cells[k]:
            a = k
            while k < n and cells[k]:
                k += 1
            starts.append(a / n)
            ends.append(k / n)
        else:
            k += 1
    return np.array(starts), np.array(ends)


def in_intervals(iv, p) -> np.ndarray:
    starts, ends = iv
    p = np.asarray(p, dtype=np.float64)
    if starts.size == 0:
        return np.zeros(p.shape, dtype=bool)
    i = np.searchsorted(starts, p, side="right") - 1
    return (i >= 0) & (p <= ends[np.maximum(i, 0)])


def triple_enumeration(cells, curve, lambdas) -> bool:
    """Is there a pair of half-cell lattice points x > y in E with t = x - y >= w,
    the triple {x, y, x - gamma_lam(t)} in E and not inside one closed cell?"""
    cells = np.asarray(cells, dtype=bool)
    n = cells.size
    iv = closed_intervals(cells)
    lattice = np.arange(2 * n + 1) / (2 * n)
    pts = lattice[in_intervals(iv, lattice)]
    w = 1.0 / n
    for lam in lambdas:
        g = curve.scaled(lam)
        for x in pts:
            t = x - pts
            t = t[t >= w]
            t = t[g.in_domain(t)]
            if not t.size:
                continue
            z = x - g(t)
            lo = np.minimum(np.minimum(x - t, z), x)
            hi = np.maximum(np.maximum(x - t, z), x)
            inside_one = (hi - lo <= w) & (np.ceil(hi * n) - np.floor(lo * n) <= 1)
            if np.any(in_intervals(iv, z) & ~inside_one):
                return True
    return False


# --- configuration integral -----------------------------------------------------


def uniform_main_term(A: float, ell: int, curve, chi, cdf, panels: int = 64, order: int = 64) -> float:
    """Main term for the uniform probability measure on [0, 1].

    The low-passed density is Phi(A y) - Phi(A (y - 1)) in closed form; the x
    integral over [0, 1] uses a fixed high-order Gauss-Legendre rule and the
    t integral adaptive quadrature.
    """
    from scipy import integrate

    gx, gw = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    xs = np.concatenate([a + (b - a) * (gx + 1) / 2 for a, b in zip(edges[:-1], edges[1:])])
    ws = np.tile(gw / 2 / panels, panels)

    def u(y):
        return cdf(A * y) - cdf(A * (y - 1.0))

    def inner(t):
        return float(chi(2.0 ** ell * t)) * float(ws @ (u(xs - t) * u(xs - curve(t))))

    lo, hi = 2.0 ** (-ell - 1), 2.0 ** (-ell + 2)
    val, _ = integrate.quad(inner, lo, hi, points=[2.0 ** -ell, 2.0 ** (-ell + 1)],
                            epsabs=1e-14, epsrel=1e-13, limit=500)
    return val
