import math

import numpy as np
import pytest
from scipy import integrate

from curvedroth.bump import ANNULUS, MOLLIFIER
from curvedroth.config_integral import (TERMS, chi_ell, configuration_integral, decompose,
                                        epsilon_ladder, main_term_check, required_B_log2)
from curvedroth.curves import get_curve, polynomial
from curvedroth.dyadic import DomainError, GridParams
from curvedroth.fractal_gen import full_interval
from curvedroth.gridmeasure import GridMeasure
from curvedroth.measures import SpectralGapParams, spectral_gap_measure
from oracles import uniform_main_term

T2 = get_curve("t2")
UNIFORM = GridMeasure.uniform(GridParams(1, 3))
MAIN_UNIFORM_ELL7 = 0.01690853515572008


def test_chi_examples():
    assert chi_ell(0, 1.5) == 1.0
    assert chi_ell(3, 3 / 16) == 1.0
    assert chi_ell(2, 1.1) == 0.0
    with pytest.raises(ValueError):
        chi_ell(-1, 0.5)


def _reduced_limit():
    val, _ = integrate.quad(lambda t: float(ANNULUS(t)) * (1 - t), 0.5, 1.0, epsabs=1e-14)
    return val


def test_configuration_integral_uniform_limit():
    limit = _reduced_limit()
    errs = [abs(configuration_integral(UNIFORM, T2, 0, e) - limit) for e in (2.0 ** -6, 2.0 ** -9)]
    assert errs[0] < 2.0 ** -6 and errs[1] < 2.0 ** -9
    assert errs[1] < errs[0]


def test_epsilon_ladder_stabilizes():
    lad = epsilon_ladder(UNIFORM, T2, 0, range(6, 11))
    assert len(lad.values) == 5 and max(lad.deltas) <= 1e-3
    assert lad.stable_min == min(lad.values[-3:])


def test_separated_support_gives_zero():
    w = np.zeros(64)
    w[40] = 1.0
    mu = GridMeasure(GridParams(1, 6), w)
    # cell width 1/64 < 2^-(l+1) = 1/16; with eps << width, x - t leaves the support
    assert configuration_integral(mu, T2, 3, 1e-3) == 0.0


def test_decomposition_identity_and_zero_band():
    rng = np.random.default_rng(4)
    w = rng.random(32) * (rng.random(32) < 0.7)
    mu = GridMeasure(GridParams(1, 5), w / w.sum())
    rep = decompose(mu, T2, 3, 1 / 40, 2.0, 8.0)
    assert abs(rep.split_residual) <= 1e-10
    assert abs(rep.total - (rep.main + rep.error_sum)) <= 1e-10
    assert rep.main >= 0
    same = decompose(mu, T2, 3, 1 / 40, 8.0, 8.0)
    for k in ("I1", "II1", "II2", "III1", "IV1"):
        assert same.terms[k] == 0.0
    assert abs(same.split_residual) <= 1e-10


def test_decompose_domain_checks():
    with pytest.raises(ValueError):
        decompose(UNIFORM, T2, 2, 0.1, 4.0, 16.0)
    with pytest.raises(ValueError):
        decompose(UNIFORM, T2, 2, 1e-3, 8.0, 4.0)
    with pytest.raises(ValueError):
        decompose(UNIFORM, T2, 2, 1e-6, 4.0, 16.0, sigma=0.05, tt=0.9)


def test_decompose_defaults_and_report():
    rep = decompose(UNIFORM, T2, 2, 1 / 40, 2.0)
    assert rep.params["B"] == 16.0
    assert rep.required_B_log2 == pytest.approx(required_B_log2(2, 0.2, 0.9))
    assert set(rep.terms) == set(TERMS) and set(rep.passes) == set(TERMS)
    d = rep.as_dict()
    assert d["main"] == rep.main and "bounds" in d


def test_main_term_matches_oracle():
    res = main_term_check(UNIFORM, T2, 7)
    ref = uniform_main_term(16.0, 7, T2, ANNULUS.value, MOLLIFIER.cdf)
    assert res.main == pytest.approx(ref, abs=1e-9)
    assert res.main == pytest.approx(MAIN_UNIFORM_ELL7, rel=1e-9)
    assert res.bound == 1 / (409600 * 16) and res.passed and res.A == 16.0


def test_main_term_scaling_in_ell():
    vals = {ell: main_term_check(UNIFORM, T2, ell).main for ell in (5, 6, 7, 8)}
    for ell in (5, 6, 7):
        ratio = vals[ell + 1] / vals[ell]
        assert 0.5 / 4 <= ratio <= 0.5 * 4


def test_main_term_growth_precondition():
    with pytest.raises(DomainError):
        main_term_check(UNIFORM, polynomial("2t", {1: 2.0, 2: 1.0}), 6)
    with pytest.raises(ValueError):
        main_term_check(UNIFORM, T2, 3)


def test_band_term_shrinks_with_A():
    mu = spectral_gap_measure(full_interval(GridParams(1, 8)), SpectralGapParams(T=4))[0]
    small = decompose(mu, T2, 4, 1 / 600, 4.0, 256.0)
    large = decompose(mu, T2, 4, 1 / 600, 16.0, 256.0)
    assert abs(large.terms["I1"]) < abs(small.terms["I1"])
    assert all(math.isfinite(v) for v in large.terms.values())
