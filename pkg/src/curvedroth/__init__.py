"""Dyadic content, energy measures and curved three-point patterns in fractal sets."""
from .bump import ANNULUS, MOLLIFIER, WEIGHT, SmoothCutoff
from .config_integral import (DecompositionReport, chi_ell, configuration_integral, decompose,
                              epsilon_ladder, main_term_check)
from .content import ContentQuery, content_table, frostman_measure, good_cube
from .curves import Curve, builtin_catalog, check_theta, eval_scaled, get_curve
from .dyadic import DyadicInterval, DyadicSet, GridParams, read_set, write_set
from .fourier import (FrequencyGrid, SobolevSpec, band_norms, energy_fourier_ratio,
                      high_frequency_tail, riesz_energy, smoothing_probe, sobolev_norm,
                      spectral_gap_integral)
from .fractal_gen import full_interval, random_branching, self_similar
from .gridmeasure import GridMeasure, frostman_ratio
from .measures import SpectralGapParams, epsilon_N, mollify, spectral_gap_measure
from .patterns import PatternWitness, find_patterns, verify_witness
from .pipeline import PipelineParams, pipeline_endtoend

__all__ = [name for name in dir() if not name.startswith("_")]
