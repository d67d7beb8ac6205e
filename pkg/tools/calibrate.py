"""Calibrate the bound constants on the uniform measure and print them.

Each constant is twice the largest ratio |term| / shape seen over the runs
below; the printed values are frozen in src/curvedroth/constants.py.
"""
import argparse

from curvedroth.config_integral import TERMS, decompose
from curvedroth.curves import get_curve
from curvedroth.dyadic import GridParams
from curvedroth.fourier import hf_expression, high_frequency_tail
from curvedroth.gridmeasure import GridMeasure
from curvedroth import constants

RUNS = [(ell, A) for ell in (4, 5, 6) for A in (2.0, 4.0, 8.0)]


def shapes(rep):
    """Bound per term divided by its frozen constant."""
    b = rep.bounds
    return {
        "I1": b["I1"] / constants.C_I1, "II1": b["II1"] / constants.C_II1,
        "IV1": b["IV1"] / constants.C_IV1,
        **{k: b[k] / constants.C_HIGH for k in ("I2", "II2", "III1", "III2", "IV2")},
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curve", default="t2")
    args = ap.parse_args()
    mu = GridMeasure.uniform(GridParams(1, 0))
    curve = get_curve(args.curve)
    worst = {k: 0.0 for k in ("I1", "II1", "IV1", "HIGH")}
    for ell, A in RUNS:
        B = 4.0 * A
        rep = decompose(mu, curve, ell, 0.5 / B, A, B)
        sh = shapes(rep)
        for k in TERMS[1:]:
            key = k if k in worst else "HIGH"
            worst[key] = max(worst[key], abs(rep.terms[k]) / sh[k])
        print(ell, A, {k: f"{rep.terms[k]:.3e}" for k in TERMS})
    hf = 0.0
    for B in (16.0, 64.0, 256.0):
        for eps in (B ** -2, 0.5 / B):
            value, _ = high_frequency_tail(mu, eps, B, 0.2, 0.9)
            hf = max(hf, value / hf_expression(mu, eps, B, 0.2, 0.9))
    print(f"HF_TAIL_CONSTANT = {2 * hf:.3g}")
    for k, v in worst.items():
        print(f"C_{k} = {2 * v:.3g}")


if __name__ == "__main__":
    main()
