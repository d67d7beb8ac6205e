import numpy as np
from scipy import integrate

from curvedroth.bump import (ANNULUS, MOLLIFIER, WEIGHT, annulus, bump, bump_cdf, bump_fourier,
                             check_cutoffs)


def test_cutoff_properties():
    r = check_cutoffs()
    assert abs(r["mollifier_integral"] - 1) < 1e-13
    assert r["mollifier_min_on_half"] >= 0.5
    assert r["mollifier_even"]
    assert abs(r["mollifier_fourier_at_0"] - 1) < 1e-12
    assert abs(r["weight_integral"] - 1) < 1e-13
    assert r["weight_sup"] <= 2.0
    assert r["annulus_plateau_min"] == 1.0 and r["annulus_outside_max"] == 0.0
    assert r["annulus_range_ok"]


def test_bump_support():
    assert np.all(bump(np.array([-1.0, 1.0, 1.5, -3.0])) == 0.0)
    assert bump(0.0) > 0.8


def test_cdf_matches_adaptive_quadrature():
    for u in (-0.7, -0.1, 0.0, 0.33, 0.9):
        ref, _ = integrate.quad(lambda v: float(bump(v)), -1.0, u, epsabs=1e-14)
        assert abs(float(bump_cdf(u)) - ref) < 1e-12


def test_fourier_matches_direct_integral():
    for xi in (0.0, 0.3, 1.7, 5.25, 12.0):
        ref, _ = integrate.quad(lambda v: float(bump(v)) * np.cos(2 * np.pi * xi * v), -1, 1,
                                epsabs=1e-14, limit=200)
        assert abs(float(bump_fourier(xi)) - ref) < 1e-11


def test_weight_fourier_is_shifted_bump():
    xi = np.linspace(-20, 20, 41)
    for x in xi[::7]:
        re, _ = integrate.quad(lambda v: float(WEIGHT(v)) * np.cos(2 * np.pi * x * v), 0, 1,
                               epsabs=1e-14, limit=200)
        im, _ = integrate.quad(lambda v: -float(WEIGHT(v)) * np.sin(2 * np.pi * x * v), 0, 1,
                               epsabs=1e-14, limit=200)
        assert abs(complex(WEIGHT.fourier(x)) - complex(re, im)) < 1e-11


def test_annulus_shape():
    assert annulus(1.5) == 1.0 and annulus(0.5) == 0.0 and annulus(4.0) == 0.0
    t = np.linspace(0.5, 1.0, 200)
    assert np.all(np.diff(annulus(t)) >= 0)
    t = np.linspace(2.0, 4.0, 200)
    assert np.all(np.diff(annulus(t)) <= 0)


def test_kinds_and_supports():
    assert (MOLLIFIER.kind, WEIGHT.kind, ANNULUS.kind) == ("mollifier", "weight", "annulus")
    assert MOLLIFIER.support == (-1.0, 1.0) and WEIGHT.support == (0.0, 1.0)
    assert ANNULUS.support == (0.5, 4.0)
