"""The configuration integral and its split into a main term and eight error terms.

F(f, g) = integral integral f(x - t) g(x - gamma(t)) chi(2^ell t) dt dmu(x).
The outer integral is a sum over cells of mu, each cell averaged with
Gauss-Legendre panels no wider than half the finest smoothing scale.  The
inner t integral is adaptive Gauss-Kronrod (batched over panels) over [2^{-ell-1}, 2^{-ell+2}]
with breakpoints at the ends of the plateau of chi.  All requested products
share the same nodes, so the split total = main + errors holds to rounding.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import constants
from .bump import ANNULUS, SmoothCutoff
from .curves import Curve
from .dyadic import DomainError
from .fourier import hf_expression, riesz_energy
from .gridmeasure import GridMeasure
from .measures import MollifiedDensity

TERMS = ("main", "I1", "I2", "II1", "II2", "III1", "III2", "IV1", "IV2")

# (first factor, second factor) with a = mu_{1/A}, b = mu_{1/B} - mu_{1/A}, c = mu_eps - mu_{1/B}
TERM_FACTORS = {
    "main": ("a", "a"), "I1": ("a", "b"), "I2": ("a", "c"),
    "II1": ("b", "b"), "II2": ("c", "b"), "III1": ("b", "c"),
    "III2": ("c", "c"), "IV1": ("b", "a"), "IV2": ("c", "a"),
}


class QuadratureError(RuntimeError):
    pass


def chi_ell(ell: int, t, chi: SmoothCutoff = ANNULUS):
    """chi(2^ell t); vanishes outside [2^{-ell-1}, 2^{-ell+2}]."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    return chi.value(2.0 ** ell * np.asarray(t, dtype=np.float64))


def t_support(ell: int) -> tuple[float, float]:
    return 2.0 ** (-ell - 1), 2.0 ** (-ell + 2)


@dataclass(frozen=True)
class OuterRule:
    """Nodes and weights realizing integral g dmu for cellwise-smooth g."""

    x: np.ndarray
    w: np.ndarray

    @classmethod
    def build(cls, mu: GridMeasure, scale: float, order: int = 8) -> "OuterRule":
        idx = np.flatnonzero(mu.weights)
        width = mu.width
        panels = max(1, int(math.ceil(width / (0.5 * scale))))
        gx, gw = np.polynomial.legendre.leggauss(order)
        h = width / panels
        # offsets inside a cell, and the matching weights per unit cell mass
        offs = (np.arange(panels)[:, None] * h + 0.5 * h * (gx[None, :] + 1.0)).ravel()
        rel = np.tile(0.5 * gw / panels, panels)
        x = (idx[:, None] * width + offs[None, :]).ravel()
        w = (mu.weights[idx][:, None] * rel[None, :]).ravel()
        return cls(x, w)


# Kronrod 21-point rule on [-1, 1]; the embedded 10-point Gauss rule sits on the odd nodes
_KX = np.array([0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                0.294392862701460198131126603103866, 0.148874338981631210884826001129720])
_KW = np.array([0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
                0.142775938577060080797094273138717, 0.147739104901338491374841515972068])
_KW0 = 0.149445554002916905664936468389821
_GW = np.array([0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                0.295524224714752870173892994651338])
GK_NODES = np.concatenate((-_KX, [0.0], _KX[::-1]))
GK_WEIGHTS = np.concatenate((_KW, [_KW0], _KW[::-1]))
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _GW
GAUSS_WEIGHTS[11:20:2] = _GW[::-1]


def adaptive_gk21(f, edges, epsabs: float, epsrel: float = 1e-12, limit: int = 20000):
    """Globally adaptive Gauss-Kronrod integration of a vector-valued f over [edges[0], edges[-1]].

    ``f`` maps an array of abscissae to an array of shape (len(t), k); every
    round evaluates the nodes of all newly created panels in one call.
    Panels with the largest errors are bisected until the summed error
    estimate |K21 - G10| falls below max(epsabs, epsrel |I|).
    Returns (integral, error estimate, panel count).
    """
    edges = np.asarray(edges, dtype=np.float64)
    lo, hi = edges[:-1], edges[1:]
    keep_lo = np.empty(0)
    keep_hi = np.empty(0)
    keep_val = None
    keep_err = np.empty(0)
    while True:
        c = 0.5 * (lo + hi)
        h = 0.5 * (hi - lo)
        t = (c[:, None] + h[:, None] * GK_NODES[None, :]).ravel()
        vals = np.asarray(f(t), dtype=np.float64).reshape(lo.size, GK_NODES.size, -1)
        K = h[:, None] * np.einsum("j,mjk->mk", GK_WEIGHTS, vals)
        G = h[:, None] * np.einsum("j,mjk->mk", GAUSS_WEIGHTS, vals)
        err = np.linalg.norm(K - G, axis=1)
        all_lo = np.concatenate((keep_lo, lo))
        all_hi = np.concatenate((keep_hi, hi))
        all_val = K if keep_val is None else np.concatenate((keep_val, K))
        all_err = np.concatenate((keep_err, err))
        total = all_val.sum(axis=0)
        total_err = float(all_err.sum())
        tol = max(epsabs, epsrel * float(np.linalg.norm(total)))
        if total_err <= tol:
            break
        if all_lo.size >= limit:
            raise QuadratureError(f"t-quadrature did not reach {tol:g} within {limit} panels "
                                  f"(error {total_err:g})")
        # bisect the worst panels until the rest would already meet the tolerance
        order = np.argsort(-all_err, kind="stable")
        csum = np.cumsum(all_err[order])
        nsplit = int(np.searchsorted(csum, total_err - 0.5 * tol)) + 1
        nsplit = max(1, min(nsplit, limit - all_lo.size, order.size))
        split = np.zeros(all_lo.size, dtype=bool)
        split[order[:nsplit]] = True
        keep_lo, keep_hi = all_lo[~split], all_hi[~split]
        keep_val, keep_err = all_val[~split], all_err[~split]
        mid = 0.5 * (all_lo[split] + all_hi[split])
        lo = np.concatenate((all_lo[split], mid))
        hi = np.concatenate((mid, all_hi[split]))
    order = np.argsort(all_lo, kind="stable")
    return all_val[order].sum(axis=0), total_err, int(all_lo.size)


def _pair_integrals(mu: GridMeasure, curve: Curve, ell: int, bases: dict, pairs: list,
                    scale: float, epsabs: float = 1e-9, order: int = 8, combos: dict | None = None):
    """integral of sum_x W f(x - t) g(x - gamma(t)) chi_ell(t) dt for each (f, g) in pairs.

    ``bases`` maps names to density evaluators; ``combos`` maps further names
    to lists of (coefficient, base name) and is formed after evaluation, so
    every base is evaluated once per t and shift.
    """
    combos = combos or {}
    rule = OuterRule.build(mu, scale, order)
    lo, hi = t_support(ell)
    used = {n for p in pairs for n in p}

    def values(shift):
        v = {n: f(shift) for n, f in bases.items()}
        for n in used - v.keys():
            v[n] = sum(c * v[b] for c, b in combos[n])
        return v

    chunk = max(1, 1_000_000 // max(1, rule.x.size))

    def integrand(t):
        out = np.empty((t.size, len(pairs)))
        for a in range(0, t.size, chunk):
            tb = t[a:a + chunk]
            v1 = values(rule.x[None, :] - tb[:, None])
            v2 = values(rule.x[None, :] - curve(tb)[:, None])
            c = chi_ell(ell, tb)[:, None] * rule.w[None, :]
            for j, (f, g) in enumerate(pairs):
                out[a:a + chunk, j] = np.einsum("ij,ij->i", c * v1[f], v2[g])
        return out

    if rule.x.size == 0:
        return np.zeros(len(pairs)), 0.0
    edges = [lo, 2.0 ** -ell, 2.0 ** (-ell + 1), hi]
    res, err, _ = adaptive_gk21(integrand, edges, epsabs)
    return np.asarray(res), float(err)


def configuration_integral(mu: GridMeasure, curve: Curve, ell: int, eps: float,
                           epsabs: float = 1e-9) -> float:
    """integral integral mu_eps(x - t) mu_eps(x - gamma(t)) chi(2^ell t) dt dmu(x)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    dens = MollifiedDensity(mu, eps)
    res, _ = _pair_integrals(mu, curve, ell, {"e": dens}, [("e", "e")], eps, epsabs)
    return float(res[0])


@dataclass
class LadderResult:
    ks: list
    values: list
    deltas: list
    stable_min: float


def epsilon_ladder(mu: GridMeasure, curve: Curve, ell: int, ks) -> LadderResult:
    """Values at eps = 2^-k; the limit inferior is surrogated by the minimum of the last three rungs."""
    ks = list(ks)
    vals = [configuration_integral(mu, curve, ell, 2.0 ** -k) for k in ks]
    deltas = [abs(b - a) for a, b in zip(vals, vals[1:])]
    return LadderResult(ks, vals, deltas, min(vals[-3:]))


@dataclass
class DecompositionReport:
    total: float
    terms: dict
    bounds: dict
    passes: dict
    params: dict
    split_residual: float
    quad_error: float
    required_B_log2: float | None = None
    notes: list = field(default_factory=list)

    @property
    def main(self) -> float:
        return self.terms["main"]

    @property
    def error_sum(self) -> float:
        return sum(v for k, v in self.terms.items() if k != "main")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["main"] = self.main
        d["error_sum"] = self.error_sum
        return d


def term_bounds(mu: GridMeasure, ell: int, eps: float, A: float, B: float, sigma: float,
                tt: float, kappa: float | None = None) -> dict:
    """Bound shapes per term with the frozen constants; main carries the lower bound."""
    kappa = constants.KAPPA if kappa is None else kappa
    P = hf_expression(mu, eps, B, sigma, tt)
    energy = riesz_energy(mu, 1.0 - sigma)
    grow = 2.0 ** (kappa * ell)
    return {
        "main": 1.0 / (409600.0 * A),
        "I1": constants.C_I1 * 2.0 ** -ell * A ** -0.25,
        "II1": constants.C_II1 * 2.0 ** -ell * A ** -2.5,
        "IV1": constants.C_IV1 * 2.0 ** -ell * A ** -0.25,
        "I2": constants.C_HIGH * grow * energy * math.sqrt(P),
        "IV2": constants.C_HIGH * grow * energy * math.sqrt(P),
        "II2": constants.C_HIGH * grow * A ** (-11 / 8) * math.sqrt(energy * P),
        "III1": constants.C_HIGH * grow * A ** (-11 / 8) * math.sqrt(energy * P),
        "III2": constants.C_HIGH * grow * math.sqrt(energy) * P,
    }


def required_B_log2(ell: int, sigma: float, tt: float, kappa: float | None = None) -> float:
    """log2 of the size of B the argument asks for, 10 (kappa+1) ell / (tt - (1 - sigma))."""
    kappa = constants.KAPPA if kappa is None else kappa
    return 10.0 * (kappa + 1.0) * ell / (tt - (1.0 - sigma))


def decompose(mu: GridMeasure, curve: Curve, ell: int, eps: float, A: float, B: float | None = None,
              sigma: float = 0.2, tt: float = 0.9, epsabs: float = 1e-9) -> DecompositionReport:
    """Split the configuration integral at scales 1/A and 1/B into main + eight error terms."""
    if B is None:
        B = A ** 4
    if not 1.0 < A <= B:
        raise ValueError("need 1 < A <= B")
    if not 0.0 < eps < 1.0 / B:
        raise ValueError("need 0 < eps < 1/B")
    if not 0.0 < sigma < 1.0 or not 1.0 - sigma < tt < 1.0:
        raise ValueError("need sigma in (0,1) and 1 - sigma < tt < 1")
    low = MollifiedDensity(mu, 1.0 / A)
    mid = low if B == A else MollifiedDensity(mu, 1.0 / B)
    high = MollifiedDensity(mu, eps)
    bases = {"a": low, "e": high}
    if mid is not low:
        bases["m"] = mid
    combos = {"b": [(1.0, "m" if mid is not low else "a"), (-1.0, "a")],
              "c": [(1.0, "e"), (-1.0, "m" if mid is not low else "a")]}
    pairs = [("e", "e")] + [TERM_FACTORS[k] for k in TERMS]
    res, err = _pair_integrals(mu, curve, ell, bases, pairs, eps, epsabs, combos=combos)
    total = float(res[0])
    terms = {k: float(v) for k, v in zip(TERMS, res[1:])}
    bounds = term_bounds(mu, ell, eps, A, B, sigma, tt)
    passes = {k: (terms[k] >= bounds[k]) if k == "main" else (abs(terms[k]) <= bounds[k])
              for k in TERMS}
    residual = total - sum(terms.values())
    params = {"A": A, "B": B, "eps": eps, "ell": ell, "sigma": sigma, "tt": tt,
              "curve": curve.id, "lambda": curve.lam}
    return DecompositionReport(total, terms, bounds, passes, params, residual, err,
                               required_B_log2(ell, sigma, tt))


@dataclass
class MainTermResult:
    main: float
    bound: float
    passed: bool
    A: float


def main_term_check(mu: GridMeasure, curve: Curve, ell: int, epsabs: float = 1e-12,
                    growth_points: int = 1000) -> MainTermResult:
    """Main term at A = 2^{ell-3} (so that 1/(4A) = 2^{1-ell}) against 1/(409600 A)."""
    A = 2.0 ** (ell - 3)
    if A <= 1.0:
        raise ValueError("need ell >= 4 so that A > 1")
    t = np.linspace(0.0, 1.0 / (4.0 * A), growth_points + 1)[1:]
    t = t[curve.in_domain(t)]
    if t.size == 0 or np.any(np.abs(curve(t)) > t * (1 + 1e-12)):
        raise DomainError(f"{curve.id}: |gamma(t)| <= |t| fails on (0, 1/(4A)]")
    low = MollifiedDensity(mu, 1.0 / A)
    res, _ = _pair_integrals(mu, curve, ell, {"a": low}, [("a", "a")], 1.0 / A, epsabs)
    main = float(res[0])
    bound = 1.0 / (409600.0 * A)
    return MainTermResult(main, bound, main >= bound, A)
