"""Curves gamma with gamma(0) = 0, their rescalings, and sampled class checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .dyadic import DomainError


@dataclass(frozen=True)
class Curve:
    """gamma with exact first and second derivatives.

    ``lam`` is the scaling parameter: calling the curve evaluates
    gamma_lam(t) = gamma(lam t) / lam.  ``growth_limit`` is the t0 below
    which |gamma(t)| <= M |t| is asserted; ``domain`` bounds the argument
    lam * t.
    """

    id: str
    g: Callable
    dg: Callable
    d2g: Callable
    M: float = 1.0
    growth_limit: float = 1.0
    domain: tuple = (-math.inf, math.inf)
    lam: float = 1.0
    description: str = field(default="", compare=False)

    def scaled(self, lam: float) -> "Curve":
        if lam <= 0:
            raise DomainError("lambda must be positive")
        return replace(self, lam=float(lam))

    def _arg(self, t):
        u = self.lam * np.asarray(t, dtype=np.float64)
        lo, hi = self.domain
        if np.any(u < lo) or np.any(u > hi):
            raise DomainError(f"{self.id}: lambda*t outside [{lo}, {hi}]")
        return u

    def in_domain(self, t) -> np.ndarray:
        u = self.lam * np.asarray(t, dtype=np.float64)
        return (u >= self.domain[0]) & (u <= self.domain[1])

    def __call__(self, t):
        return self.g(self._arg(t)) / self.lam

    def derivative(self, t):
        return self.dg(self._arg(t))

    def second_derivative(self, t):
        return self.lam * self.d2g(self._arg(t))


def eval_scaled(c: Curve, lam: float, t):
    """gamma_lam(t) = gamma(lam t) / lam for the base curve of ``c``."""
    return c.scaled(lam)(t)


def polynomial(id: str, coeffs: dict, M: float = 1.0, growth_limit: float = 1.0) -> Curve:
    """sum of a_k t^k from ``coeffs = {k: a_k}``."""
    items = sorted(coeffs.items())

    def g(t):
        return sum(a * t ** k for k, a in items)

    def dg(t):
        return sum(a * k * t ** (k - 1) for k, a in items if k >= 1) + 0.0 * t

    def d2g(t):
        return sum(a * k * (k - 1) * t ** (k - 2) for k, a in items if k >= 2) + 0.0 * t

    return Curve(id, g, dg, d2g, M, growth_limit)


def _tk_log1p(k: int) -> Curve:
    def g(t):
        return t ** k * np.log1p(t)

    def dg(t):
        return k * t ** (k - 1) * np.log1p(t) + t ** k / (1 + t)

    def d2g(t):
        lead = k * (k - 1) * t ** (k - 2) * np.log1p(t) if k >= 2 else 0.0
        return lead + 2 * k * t ** (k - 1) / (1 + t) - t ** k / (1 + t) ** 2

    name = "tlog1p" if k == 1 else f"t{k}log1p"
    return Curve(name, g, dg, d2g, 1.0, 1.0, (0.0, math.inf))


def builtin_catalog() -> list[Curve]:
    return [
        polynomial("t2", {2: 1.0}),
        polynomial("t3", {3: 1.0}),
        # t^2 + t^3 <= t needs t <= 0.618...
        polynomial("t2+t3", {2: 1.0, 3: 1.0}, growth_limit=0.6),
        _tk_log1p(1),
        _tk_log1p(2),
        Curve("t-sin", lambda t: t - np.sin(t), lambda t: 1 - np.cos(t), np.sin),
        Curve("tan-t", lambda t: np.tan(t) - t, lambda t: np.tan(t) ** 2,
              lambda t: 2 * np.tan(t) / np.cos(t) ** 2, domain=(-1.0, 1.0)),
        Curve("t-arctan", lambda t: t - np.arctan(t), lambda t: t * t / (1 + t * t),
              lambda t: 2 * t / (1 + t * t) ** 2),
        # derivative blows up at t = 1
        Curve("arcsin-t", lambda t: np.arcsin(t) - t, lambda t: 1 / np.sqrt(1 - t * t) - 1,
              lambda t: t / (1 - t * t) ** 1.5, growth_limit=0.99, domain=(-0.99, 0.99)),
    ]


def get_curve(id: str) -> Curve:
    for c in builtin_catalog():
        if c.id == id:
            return c
    raise KeyError(f"unknown curve {id!r}; known: {', '.join(c.id for c in builtin_catalog())}")


@dataclass
class ThetaReport:
    curve: str
    growth: bool
    derivative_nonzero: bool
    nondegenerate: bool
    non_affine: bool
    log_exponential_exclusion: str = "attested-by-catalog"
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_theta(c: Curve, points: int = 1000) -> ThetaReport:
    """Sampled checks of gamma(0)=0, the growth bound, gamma' != 0,
    |1 - gamma'| + |gamma''| != 0 and non-affineness on (0, 1)."""
    if points < 100:
        raise ValueError("need at least 100 grid points")
    base = c.scaled(1.0)
    hi = min(1.0, base.domain[1])
    t = np.linspace(0.0, hi, points + 1)[1:]
    if hi == 1.0 or hi == base.domain[1]:
        t = t[:-1]
    g, dg, d2g = base(t), base.derivative(t), base.second_derivative(t)
    small = t[t <= c.growth_limit]
    growth = bool(abs(float(base(0.0))) == 0.0
                  and np.all(np.abs(base(small)) <= c.M * small * (1 + 1e-12)))
    deriv = bool(np.all(dg != 0.0))
    nondeg = bool(np.all(np.abs(1 - dg) + np.abs(d2g) > 1e-14))
    second_diff = g[2:] - 2 * g[1:-1] + g[:-2]
    non_affine = bool(np.any(np.abs(second_diff) > 1e-12 * (1 + np.abs(g[1:-1]))))
    failures = [name for name, ok in (("growth", growth), ("derivative_nonzero", deriv),
                                      ("nondegenerate", nondeg), ("non_affine", non_affine))
                if not ok]
    return ThetaReport(c.id, growth, deriv, nondeg, non_affine, failures=failures)
