"""Mollification and the energy / spectral-gap measure construction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bump import MOLLIFIER, WEIGHT, SmoothCutoff
from .content import content_table, cube_cost, frostman_weights, good_cube
from .dyadic import DyadicInterval, DyadicSet, GridParams
from .gridmeasure import GridMeasure, frostman_ratio, read_measure, write_measure  # noqa: F401


class ConstructionError(RuntimeError):
    """The measure construction cannot proceed at this resolution."""


@dataclass(frozen=True)
class SpectralGapParams:
    N: int = 1
    T: int = 8
    tt: float = 0.9
    J: int = 0
    A: float = 16.0
    B: float = 256.0

    def __post_init__(self):
        if self.N < 1 or self.T < 1:
            raise ValueError("N and T must be positive")
        if not 0.0 < self.tt < 1.0:
            raise ValueError("energy exponent must lie in (0, 1)")
        if not 1.0 < self.A < self.B:
            raise ValueError("need 1 < A < B")
        if self.J < 0:
            raise ValueError("J must be nonnegative")

    @property
    def eps_N(self) -> float:
        return epsilon_N(self)

    @property
    def s(self) -> float:
        return self.N * (1.0 - self.eps_N)

    @property
    def delta(self) -> float:
        return 2.0 ** (-self.N * self.T - 2)


def epsilon_N(p: SpectralGapParams) -> float:
    NT = p.N * p.T
    return min(math.log2(1.0 + 2.0 ** (-NT - 2)) / NT,
               1.0 / (4 * p.N * p.N),
               (1.0 - p.tt) / (2 * p.N))


@dataclass
class SpectralGapDiagnostics:
    cube: DyadicInterval
    delta: float
    s: float
    eps_N: float
    skipped: list = field(default_factory=list)
    nu_total: float = 0.0
    target_total: float = 0.0
    min_child_ratio: float = 0.0

    def as_dict(self) -> dict:
        return {
            "cube": {"level": self.cube.level, "index": self.cube.index},
            "delta": self.delta,
            "s": self.s,
            "eps_N": self.eps_N,
            "skipped": list(self.skipped),
            "nu_total": self.nu_total,
            "target_total": self.target_total,
            "min_child_ratio": self.min_child_ratio,
        }


def spectral_gap_measure(E: DyadicSet, p: SpectralGapParams,
                         weight: SmoothCutoff = WEIGHT):
    """Probability measure on T_Q(E ∩ Q) whose T-th children carry the masses of ``weight``.

    Returns ``(mu, Q, diagnostics)``.  Children whose content falls below half
    their length^s cannot be certified at this resolution; they receive no
    mass and are listed in ``diagnostics.skipped``.
    """
    if weight.kind != "weight":
        raise ValueError("the construction needs the [0,1] weight bump")
    if E.N != p.N:
        raise ValueError("block exponent mismatch")
    if E.L < p.T:
        raise ConstructionError(f"resolution L={E.L} is shallower than T={p.T}")
    s, delta = p.s, p.delta
    Q = good_cube(E, s, delta, p.J, max_level=E.L - p.T)
    if Q is None:
        raise ConstructionError(
            f"no cube of level {p.J}..{E.L - p.T} has relative content >= 1 - 2^-{p.N * p.T + 2}")
    table = content_table(E, (s, min(p.J, Q.level)))
    jq = Q.level + p.T
    nchild = 1 << (p.N * p.T)
    lo, hi = Q.cell_range(E.L)
    blocks = E.cells[lo:hi].reshape(nchild, -1)
    edges = np.arange(nchild + 1) / nchild
    phi_q = np.diff(weight.cdf(edges))
    target = cube_cost(Q.level, s)
    child_cost = cube_cost(jq, s)
    child_vals = table.values[jq][Q.index * nchild:(Q.index + 1) * nchild]

    diag = SpectralGapDiagnostics(Q, delta, s, p.eps_N, target_total=target)
    diag.min_child_ratio = float(child_vals.min() / child_cost)
    weights = np.zeros(blocks.shape)
    for i in range(nchild):
        if child_vals[i] < 0.5 * child_cost:
            diag.skipped.append(i)
            continue
        nu_tilde = frostman_weights(blocks[i], p.N, jq, s)
        weights[i] = nu_tilde * (phi_q[i] * target / nu_tilde.sum())
    nu_total = float(weights.sum())
    diag.nu_total = nu_total
    if len(diag.skipped) == nchild:
        raise ConstructionError("every T-child failed the half-content test")
    if nu_total <= 0.0:
        raise ConstructionError("constructed measure has zero mass")
    mu = GridMeasure(GridParams(p.N, E.L - Q.level), weights.ravel() / nu_total)
    return mu, Q, diag


def fourier_proximity_constant(mu: GridMeasure, T: int, weight: SmoothCutoff = WEIGHT,
                               samples_per_unit: int = 16) -> float:
    """Smallest C with |mu_hat - weight_hat| <= C 2^{-T} |xi| on 0 < |xi| <= 2^T (sampled)."""
    xi, mh = mu.fourier_grid(samples_per_unit, 2.0 ** T)
    xi, mh = xi[1:], mh[1:]
    diff = np.abs(mh - weight.fourier(xi))
    return float(np.max(diff / (2.0 ** -T * xi)))


class MollifiedDensity:
    """x -> (mu * phi_eps)(x) for a grid measure, with its Fourier side.

    The per-cell integral of phi_eps is an increment of the bump's
    antiderivative.  When eps spans many cells the density is sampled on a
    grid of spacing eps/256 and read back by cubic Hermite interpolation.
    """

    DIRECT_SPAN = 2    # max cells per kernel width for direct summation
    GRID_RES = 256     # samples per eps in grid mode

    def __init__(self, mu: GridMeasure, eps: float, phi: SmoothCutoff = MOLLIFIER):
        if eps <= 0:
            raise ValueError("eps must be positive")
        if phi.kind != "mollifier":
            raise ValueError("mollification needs the symmetric bump")
        self.mu = mu
        self.eps = float(eps)
        self.phi = phi
        n = mu.params.ncells
        self.n = n
        self.width = 1.0 / n
        rho = mu.density
        self._rho = np.concatenate(([0.0], rho, [0.0]))       # rho_ext[k+1] = rho_k
        self._jump = np.diff(self._rho)                       # jump at boundary k = 0..n
        self._grid = None
        if 2.0 * self.eps / self.width > self.DIRECT_SPAN:
            self._build_grid()

    def _direct(self, z, deriv=False):
        z = np.asarray(z, dtype=np.float64)
        eps, w, n = self.eps, self.width, self.n
        k_lo = np.floor((z - eps) / w).astype(np.int64) + 1
        k_hi = np.ceil((z + eps) / w).astype(np.int64) - 1
        k_lo = np.clip(k_lo, 0, n + 1)
        k_hi = np.clip(k_hi, -1, n)
        if deriv:
            out = np.zeros_like(z)
        else:
            out = self._rho[np.clip(k_lo, 0, n + 1)].copy()   # = rho_{k_lo - 1}
        span = int(np.max(k_hi - k_lo, initial=-1)) + 1
        for j in range(span):
            k = k_lo + j
            ok = k <= k_hi
            if not ok.any():
                continue
            kk = np.where(ok, k, 0)
            u = (z - kk * w) / eps
            if deriv:
                term = self._jump[kk] * self.phi.value(u) / eps
            else:
                term = self._jump[kk] * self.phi.cdf(u)
            out += np.where(ok, term, 0.0)
        return out

    def _build_grid(self):
        h = self.eps / self.GRID_RES
        x0 = -self.eps
        m = int(math.ceil((1.0 + 2.0 * self.eps) / h)) + 1
        zg = x0 + h * np.arange(m)
        vals = np.empty(m)
        dvals = np.empty(m)
        step = 1 << 15
        for a in range(0, m, step):
            vals[a:a + step] = self._direct(zg[a:a + step])
            dvals[a:a + step] = self._direct(zg[a:a + step], deriv=True)
        self._grid = (x0, h, vals, dvals)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self._grid is None:
            return self._direct(x)
        from .bump import _hermite
        x0, h, vals, dvals = self._grid
        inside = (x > -self.eps) & (x < 1.0 + self.eps)
        out = _hermite(np.clip(x, x0, x0 + h * (vals.size - 1)), x0, h, vals, dvals)
        return np.where(inside, out, 0.0)

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=np.float64)
        return self.mu.fourier(xi) * self.phi.fourier(self.eps * xi)


def mollify(mu: GridMeasure, eps: float, phi: SmoothCutoff = MOLLIFIER) -> MollifiedDensity:
    return MollifiedDensity(mu, eps, phi)
