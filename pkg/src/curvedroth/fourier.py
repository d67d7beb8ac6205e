"""Riesz energies, Sobolev norms and frequency-side quantities of grid measures.

Conventions: f_hat(xi) = integral f(x) exp(-2 pi i x xi) dx and
||f||^2_{H^sigma} = integral |f_hat|^2 (1 + |xi|^2)^sigma dxi, truncated at
|xi| <= xi_max.  Frequency integrals of grid measures use the uniform nodes
k / samples_per_unit from one FFT and the trapezoid rule; |mu_hat| is even,
so only xi >= 0 is sampled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate, signal, special

from .bump import annulus, bump, bump_fourier
from .constants import HF_TAIL_CONSTANT
from .gridmeasure import GridMeasure

SERIES_FROM = 64  # cell offset beyond which the kernel uses its asymptotic series


@dataclass(frozen=True)
class FrequencyGrid:
    xi_max: float = 2.0 ** 16
    samples_per_unit: int = 16

    def __post_init__(self):
        if self.xi_max <= 0 or self.samples_per_unit < 1:
            raise ValueError("need xi_max > 0 and samples_per_unit >= 1")

    @property
    def spacing(self) -> float:
        return 1.0 / self.samples_per_unit

    @property
    def count(self) -> int:
        """Number of nodes with xi > 0."""
        return int(math.floor(self.xi_max * self.samples_per_unit + 1e-9))

    def positive(self) -> np.ndarray:
        return np.arange(self.count + 1) * self.spacing

    def symmetric(self) -> np.ndarray:
        K = self.count
        return np.arange(-K, K + 1) * self.spacing


@dataclass(frozen=True)
class SobolevSpec:
    sigma: float
    xi_max: float = 2.0 ** 16
    samples_per_unit: int = 16
    rule: str = "trapezoid"

    def __post_init__(self):
        if self.xi_max <= 0:
            raise ValueError("xi_max must be positive")
        if self.rule != "trapezoid":
            raise ValueError(f"unknown quadrature rule {self.rule!r}")

    @property
    def grid(self) -> FrequencyGrid:
        return FrequencyGrid(self.xi_max, self.samples_per_unit)


class SobolevResult(NamedTuple):
    value: float
    tail: float


def _trap_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = h / 2
    return w


def _half_line(f: np.ndarray, h: float) -> float:
    """Trapezoid integral over [0, xi_max] of samples at 0, h, 2h, ..."""
    return float(_trap_weights(f.size, h) @ f)


def _segment(xi: np.ndarray, f: np.ndarray, a: float, b: float) -> float:
    """Integral over [a, b] of the piecewise-linear interpolant of (xi, f)."""
    inner = (xi > a) & (xi < b)
    nodes = np.concatenate(([a], xi[inner], [b]))
    vals = np.interp(nodes, xi, f)
    return float(integrate.trapezoid(vals, nodes))


def measure_samples(mu: GridMeasure, grid: FrequencyGrid) -> tuple[np.ndarray, np.ndarray]:
    return mu.fourier_grid(grid.samples_per_unit, grid.xi_max)


def sobolev_norm(f_hat, spec: SobolevSpec) -> SobolevResult:
    """Squared H^sigma norm, truncated, with the tail diagnostic
    |f_hat(xi_max)|^2 xi_max (1 + xi_max^2)^sigma.

    ``f_hat`` is a GridMeasure (sampled through its FFT, using evenness of
    |mu_hat|) or a callable evaluated on the symmetric grid.
    """
    grid = spec.grid
    h = grid.spacing
    if isinstance(f_hat, GridMeasure):
        xi, vals = measure_samples(f_hat, grid)
        weight = (1.0 + xi * xi) ** spec.sigma
        value = 2.0 * _half_line(np.abs(vals) ** 2 * weight, h)
        end = abs(vals[-1]) ** 2
    else:
        xi = grid.symmetric()
        vals = np.asarray(f_hat(xi), dtype=np.complex128)
        weight = (1.0 + xi * xi) ** spec.sigma
        value = float(_trap_weights(xi.size, h) @ (np.abs(vals) ** 2 * weight))
        end = max(abs(vals[0]), abs(vals[-1])) ** 2
    X = xi[-1]
    return SobolevResult(value, float(end * X * (1.0 + X * X) ** spec.sigma))


# --- Riesz energy -------------------------------------------------------------

def _riesz_kernel(t: float, dmax: int) -> np.ndarray:
    """Mean of |x - y|^{-t} over two unit cells d = 0..dmax apart."""
    k = np.empty(dmax + 1)
    c = 1.0 / ((1.0 - t) * (2.0 - t))
    k[0] = 2.0 * c
    near = min(dmax, SERIES_FROM - 1)
    if near >= 1:
        d = np.arange(1, near + 1, dtype=np.float64)
        F = lambda u: c * u ** (2.0 - t)  # noqa: E731
        k[1:near + 1] = F(d + 1) - 2.0 * F(d) + F(d - 1)
    if dmax >= SERIES_FROM:
        d = np.arange(SERIES_FROM, dmax + 1, dtype=np.float64)
        d2 = 1.0 / (d * d)
        k[SERIES_FROM:] = d ** -t * (1.0 + t * (t + 1) / 12.0 * d2
                                     + t * (t + 1) * (t + 2) * (t + 3) / 360.0 * d2 * d2)
    return k


def autocorrelation(w: np.ndarray) -> np.ndarray:
    """c_d = sum_a w_a w_{a+d}, d = 0..n-1."""
    n = w.size
    if n <= 4096:
        full = np.correlate(w, w, mode="full")
    else:
        full = signal.fftconvolve(w, w[::-1], mode="full")
    return full[n - 1:]


def riesz_energy(mu: GridMeasure, t: float) -> float:
    """I_t(mu) = double integral of |x - y|^{-t} dmu dmu, exact per cell pair."""
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    idx = np.flatnonzero(mu.weights)
    if idx.size == 0:
        return 0.0
    w = mu.weights[idx[0]:idx[-1] + 1]
    corr = autocorrelation(w)
    kern = _riesz_kernel(t, corr.size - 1)
    total = kern[0] * corr[0] + 2.0 * float(kern[1:] @ corr[1:])
    return float(total * mu.width ** -t)


def riesz_gamma(s: float) -> float:
    """The constant with I_s(mu) = gamma * integral |mu_hat|^2 |xi|^{s-1} on the line."""
    return math.pi ** (s - 0.5) * math.gamma((1.0 - s) / 2.0) / math.gamma(s / 2.0)


def fourier_energy(mu: GridMeasure, s: float, grid: FrequencyGrid | None = None) -> float:
    """integral over |xi| <= xi_max of |mu_hat|^2 |xi|^{s-1}.

    The singular weight at 0 is handled by the zeta-corrected trapezoid rule:
    for smooth even g, integral_0^X g(x) x^{s-1} dx equals
    h sum'_{k>=1} g(kh)(kh)^{s-1} - zeta(1-s) g(0) h^s + O(h^{s+2}).
    """
    if not 0.0 < s < 1.0:
        raise ValueError("s must lie in (0, 1)")
    grid = grid or FrequencyGrid()
    xi, mh = measure_samples(mu, grid)
    g = np.abs(mh) ** 2
    h = grid.spacing
    body = g[1:] * xi[1:] ** (s - 1.0)
    side = h * (body.sum() - 0.5 * body[-1]) - special.zeta(1.0 - s) * g[0] * h ** s
    return float(2.0 * side)


def energy_fourier_ratio(mu: GridMeasure, s: float, grid: FrequencyGrid | None = None) -> float:
    den = fourier_energy(mu, s, grid)
    if den <= 0.0:
        raise ZeroDivisionError("Fourier energy vanishes")
    return riesz_energy(mu, s) / den


# --- mollifier differences ----------------------------------------------------

def _lowpass(xi: np.ndarray, scale: float) -> np.ndarray:
    return bump_fourier(xi * scale)


def high_frequency_tail(mu: GridMeasure, eps: float, B: float, sigma: float, tt: float,
                        grid: FrequencyGrid | None = None) -> tuple[float, float]:
    """(||mu_eps - mu_{1/B}||^2_{H^{-sigma}}, C (eps^4 B + B^-3 + B^{(1-sigma-tt)/5} I_tt(mu)))."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if not B > 1.0:
        raise ValueError("B must exceed 1")
    if not 0.0 < sigma < 1.0:
        raise ValueError("sigma must lie in (0, 1)")
    if not 1.0 - sigma < tt < 1.0:
        raise ValueError("need 1 - sigma < tt < 1")
    grid = grid or FrequencyGrid()
    xi, mh = measure_samples(mu, grid)
    diff = _lowpass(xi, eps) - _lowpass(xi, 1.0 / B)
    value = 2.0 * _half_line(np.abs(mh * diff) ** 2 * (1.0 + xi * xi) ** -sigma, grid.spacing)
    return float(value), float(HF_TAIL_CONSTANT * hf_expression(mu, eps, B, sigma, tt))


def hf_expression(mu: GridMeasure, eps: float, B: float, sigma: float, tt: float) -> float:
    """eps^4 B + B^-3 + B^{(1-sigma-tt)/5} I_tt(mu)."""
    return eps ** 4 * B + B ** -3.0 + B ** ((1.0 - sigma - tt) / 5.0) * riesz_energy(mu, tt)


class BandNorms(NamedTuple):
    gap: float
    band: float
    tail: float


def band_norms(mu: GridMeasure, A: float, B: float, sigma: float,
               grid: FrequencyGrid | None = None) -> BandNorms:
    """integral |mu_hat||phi_hat(xi/B) - phi_hat(xi/A)| and ||mu_{1/B} - mu_{1/A}||^2_{H^{-sigma}}."""
    if A > B:
        raise ValueError("need A <= B")
    if A <= 1.0:
        raise ValueError("need A > 1")
    grid = grid or FrequencyGrid()
    xi, mh = measure_samples(mu, grid)
    diff = np.abs(_lowpass(xi, 1.0 / B) - _lowpass(xi, 1.0 / A))
    am = np.abs(mh)
    h = grid.spacing
    gap = 2.0 * _half_line(am * diff, h)
    band = 2.0 * _half_line((am * diff) ** 2 * (1.0 + xi * xi) ** -sigma, h)
    return BandNorms(float(gap), float(band), float(am[-1] * diff[-1] * xi[-1]))


def spectral_gap_integral(mu: GridMeasure, A: float, B: float,
                          grid: FrequencyGrid | None = None) -> float:
    """integral over A^{1/4} <= |xi| <= B^2 of |mu_hat|."""
    grid = grid or FrequencyGrid(max(2.0 ** 16, B * B))
    lo, hi = A ** 0.25, B * B
    if hi > grid.xi_max:
        raise ValueError("frequency grid must reach B^2")
    xi, mh = measure_samples(mu, grid)
    return 2.0 * _segment(xi, np.abs(mh), lo, hi)


# --- smoothing probe ----------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Modulated envelope f(x) = envelope((x - center)/width) exp(2 pi i freq x).

    ``kind`` is 'gauss' (exp(-u^2/2)) or 'bump' (the compactly supported bump).
    """

    kind: str = "gauss"
    center: float = 0.0
    width: float = 0.1
    freq: float = 0.0

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.kind not in ("gauss", "bump"):
            raise ValueError(f"unknown envelope {self.kind!r}")
        if self.width <= 0:
            raise ValueError("width must be positive")

    def __call__(self, x):
        u = (np.asarray(x, dtype=np.float64) - self.center) / self.width
        env = np.exp(-0.5 * u * u) if self.kind == "gauss" else bump(u)
        return env * np.exp(2j * np.pi * self.freq * np.asarray(x, dtype=np.float64))

    def fourier(self, xi):
        d = np.asarray(xi, dtype=np.float64) - self.freq
        s = self.width
        if self.kind == "gauss":
            env = s * math.sqrt(2 * math.pi) * np.exp(-2 * (math.pi * s * d) ** 2)
        else:
            env = s * bump_fourier(s * d)
        return env * np.exp(-2j * np.pi * d * self.center)

    @property
    def support(self) -> tuple[float, float]:
        r = 9.0 * self.width if self.kind == "gauss" else self.width
        return self.center - r, self.center + r

    @property
    def bandwidth(self) -> float:
        return 6.0 / self.width

    def sobolev_sq(self, sigma: float) -> float:
        """||f||^2_{H^sigma} by adaptive quadrature of the closed-form |f_hat|^2."""
        R = 2.0 * self.bandwidth
        fn = lambda x: abs(self.fourier(x)) ** 2 * (1.0 + x * x) ** sigma  # noqa: E731
        val, _ = integrate.quad(fn, self.freq - R, self.freq + R, points=[self.freq],
                                limit=400, epsabs=0.0, epsrel=1e-11)
        return float(val)


def test_function_catalog(freqs=(1, 2, 4, 8, 16, 32, 64)) -> list[TestFunction]:
    out = []
    for lam in freqs:
        out.append(TestFunction("gauss", 0.5, 0.1, float(lam)))
        out.append(TestFunction("bump", 0.5, 0.25, float(lam)))
    return out


@dataclass
class ProbeResult:
    ratio: float
    output_norm: float
    input_norms: tuple
    quad_error: float
    converged: bool
    samples: int


def bilinear_output(f1: TestFunction, f2: TestFunction, curve, ell: int,
                    x: np.ndarray, epsabs: float = 1e-10):
    """T(f1, f2)(x) = integral f1(x - t) f2(x - gamma(t)) chi(2^ell t) dt on the points x."""
    a, b = 2.0 ** (-ell - 1), 2.0 ** (-ell + 2)
    breaks = [2.0 ** -ell, 2.0 ** (-ell + 1)]
    m = x.size

    def integrand(t):
        v = f1(x - t) * f2(x - curve(t)) * annulus(2.0 ** ell * t)
        return np.concatenate((v.real, v.imag))

    res, err, info = integrate.quad_vec(integrand, a, b, epsabs=epsabs, epsrel=1e-10,
                                        points=breaks, full_output=True)
    return res[:m] + 1j * res[m:], float(err), bool(info.success)


def smoothing_probe(f1: TestFunction, f2: TestFunction, curve, ell: int,
                    sigma: float) -> ProbeResult:
    """||T(f1,f2)||_{H^sigma} / (||f1||_{H^-sigma} ||f2||_{H^-sigma}) on a sampled output."""
    a, b = 2.0 ** (-ell - 1), 2.0 ** (-ell + 2)
    tt = np.linspace(a, b, 2001)
    gv = curve(tt)
    lo1, hi1 = f1.support
    lo2, hi2 = f2.support
    x_lo = max(lo1 + a, lo2 + float(gv.min()))
    x_hi = min(hi1 + b, hi2 + float(gv.max()))
    n1 = math.sqrt(f1.sobolev_sq(-sigma))
    n2 = math.sqrt(f2.sobolev_sq(-sigma))
    if x_hi <= x_lo:
        return ProbeResult(0.0, 0.0, (n1, n2), 0.0, True, 0)
    band = abs(f1.freq) + abs(f2.freq) * max(1.0, float(np.abs(curve.derivative(tt)).max())) \
        + f1.bandwidth + f2.bandwidth
    dx = 1.0 / (4.0 * band)
    m = int(math.ceil((x_hi - x_lo) / dx)) + 1
    x = x_lo + dx * np.arange(m)
    vals, err, ok = bilinear_output(f1, f2, curve, ell, x)
    M = 1 << int(math.ceil(math.log2(4 * m)))
    spec = dx * np.fft.fft(vals, M)
    xi = np.fft.fftfreq(M, dx)
    out = float(np.sum(np.abs(spec) ** 2 * (1.0 + xi * xi) ** sigma) / (M * dx))
    out = math.sqrt(out)
    return ProbeResult(out / (n1 * n2), out, (n1, n2), err, ok, m)


def smoothing_sweep(curve, ells, freqs, sigma: float, kind: str = "gauss") -> list[dict]:
    rows = []
    for ell in ells:
        for lam in freqs:
            f = TestFunction(kind, 0.5, 0.1 if kind == "gauss" else 0.25, float(lam))
            r = smoothing_probe(f, f, curve, ell, sigma)
            rows.append({"ell": ell, "freq": lam, "sigma": sigma, "ratio": r.ratio,
                         "converged": r.converged})
    return rows


__all__ = [
    "FrequencyGrid", "SobolevSpec", "SobolevResult", "sobolev_norm", "riesz_energy",
    "riesz_gamma", "fourier_energy", "energy_fourier_ratio", "high_frequency_tail",
    "hf_expression", "band_norms", "BandNorms", "spectral_gap_integral", "TestFunction",
    "test_function_catalog", "ProbeResult", "smoothing_probe", "smoothing_sweep",
    "bilinear_output",
]
