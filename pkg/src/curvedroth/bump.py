"""Smooth cutoffs: the mollifier bump, the [0,1] weight bump and the annular cutoff.

The bump is phi(x) = c exp(-1/(1-x^2)) on (-1, 1) with c fixing the integral
to 1.  Its antiderivative and Fourier transform have no closed form, so both
are tabulated once (composite Gauss-Legendre and a trapezoid FFT, both at
machine precision for this compactly supported C^inf function) and read back
through cubic Hermite interpolation with exact derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

# phi_hat(xi) < 1e-20 beyond this frequency
FOURIER_CUTOFF = 256.0

_CDF_STEPS = 1 << 14
_FT_PERIOD = 512          # xi table spacing 1/_FT_PERIOD
_FT_DX = 1.0 / 2048


def _raw(u):
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


@lru_cache(maxsize=None)
def _cdf_table():
    h = 2.0 / _CDF_STEPS
    nodes, weights = np.polynomial.legendre.leggauss(10)
    left = -1.0 + h * np.arange(_CDF_STEPS)
    x = left[:, None] + 0.5 * h * (nodes[None, :] + 1.0)
    panel = 0.5 * h * (_raw(x) @ weights)
    cum = np.concatenate(([0.0], np.cumsum(panel)))
    norm = cum[-1]
    return norm, cum / norm


def bump_constant() -> float:
    return 1.0 / _cdf_table()[0]


def bump(u):
    """phi(u), normalized so that its integral is 1."""
    return _raw(u) * bump_constant()


def _hermite(x, x0, h, y, dy):
    x = np.asarray(x, dtype=np.float64)
    pos = (x - x0) / h
    i = np.clip(np.floor(pos).astype(np.int64), 0, y.size - 2)
    t = pos - i
    t2, t3 = t * t, t * t * t
    return ((2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * dy[i]
            + (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * dy[i + 1])


def bump_cdf(u):
    """Phi(u) = integral of phi over (-inf, u]."""
    u = np.asarray(u, dtype=np.float64)
    _, cum = _cdf_table()
    h = 2.0 / _CDF_STEPS
    grid_deriv = _cdf_deriv()
    inner = _hermite(np.clip(u, -1.0, 1.0), -1.0, h, cum, grid_deriv)
    return np.where(u <= -1.0, 0.0, np.where(u >= 1.0, 1.0, inner))


@lru_cache(maxsize=None)
def _cdf_deriv():
    h = 2.0 / _CDF_STEPS
    return bump(-1.0 + h * np.arange(_CDF_STEPS + 1))


@lru_cache(maxsize=None)
def _ft_table():
    n = int(round(_FT_PERIOD / _FT_DX))
    j = np.arange(n)
    x = np.where(j < n // 2, j, j - n) * _FT_DX
    f = bump(x)
    vals = (_FT_DX * np.fft.fft(f)).real
    dvals = (_FT_DX * np.fft.fft(-2j * np.pi * x * f)).real
    K = int(FOURIER_CUTOFF * _FT_PERIOD) + 2
    return vals[:K].copy(), dvals[:K].copy()


def bump_fourier(xi):
    """phi_hat(xi) with the convention integral phi(x) exp(-2 pi i x xi) dx."""
    xi = np.abs(np.asarray(xi, dtype=np.float64))
    vals, dvals = _ft_table()
    out = _hermite(np.minimum(xi, FOURIER_CUTOFF), 0.0, 1.0 / _FT_PERIOD, vals, dvals)
    return np.where(xi >= FOURIER_CUTOFF, 0.0, out)


def _smooth_step(x):
    """C^inf step: 0 for x <= 0, 1 for x >= 1."""
    x = np.asarray(x, dtype=np.float64)
    a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
    y = 1.0 - x
    b = np.where(y > 0, np.exp(-1.0 / np.where(y > 0, y, 1.0)), 0.0)
    return a / (a + b)


def annulus(t):
    """chi: 0 outside [1/2, 4], 1 on [1, 2], smooth ramps in between."""
    t = np.asarray(t, dtype=np.float64)
    up = _smooth_step(2.0 * t - 1.0)
    down = _smooth_step((4.0 - t) / 2.0)
    return np.where(t < 1.0, up, np.where(t > 2.0, down, 1.0))


@dataclass(frozen=True)
class SmoothCutoff:
    """One of the three cutoffs, with pointwise, antiderivative and Fourier evaluators."""

    kind: str
    value: Callable
    fourier: Callable | None
    cdf: Callable | None
    support: tuple

    def __call__(self, x):
        return self.value(x)


def _weight_value(x):
    return 2.0 * bump(2.0 * np.asarray(x, dtype=np.float64) - 1.0)


def _weight_cdf(x):
    return bump_cdf(2.0 * np.asarray(x, dtype=np.float64) - 1.0)


def _weight_fourier(xi):
    xi = np.asarray(xi, dtype=np.float64)
    return np.exp(-1j * np.pi * xi) * bump_fourier(xi / 2.0)


MOLLIFIER = SmoothCutoff("mollifier", bump, bump_fourier, bump_cdf, (-1.0, 1.0))
WEIGHT = SmoothCutoff("weight", _weight_value, _weight_fourier, _weight_cdf, (0.0, 1.0))
ANNULUS = SmoothCutoff("annulus", annulus, None, None, (0.5, 4.0))


def check_cutoffs(samples: int = 20001) -> dict:
    """Numerical checks of the properties the constructions rely on."""
    x = np.linspace(-1.0, 1.0, samples)
    half = np.linspace(-0.5, 0.5, samples)
    y = np.linspace(0.0, 1.0, samples)
    t = np.linspace(0.0, 5.0, 4 * samples)
    chi = annulus(t)
    plateau = (t >= 1.0) & (t <= 2.0)
    outside = (t <= 0.5) | (t >= 4.0)
    return {
        "mollifier_integral": float(bump_cdf(1.0) - bump_cdf(-1.0)),
        "mollifier_min_on_half": float(bump(half).min()),
        "mollifier_even": bool(np.allclose(bump(x), bump(-x), rtol=0, atol=1e-15)),
        "mollifier_fourier_at_0": float(bump_fourier(0.0)),
        "weight_integral": float(_weight_cdf(1.0) - _weight_cdf(0.0)),
        "weight_sup": float(_weight_value(y).max()),
        "annulus_plateau_min": float(chi[plateau].min()),
        "annulus_outside_max": float(chi[outside].max()),
        "annulus_range_ok": bool(np.all((chi >= 0) & (chi <= 1))),
    }
