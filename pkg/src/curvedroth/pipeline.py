"""End-to-end chain: good cube, spectral-gap measure, decomposition, main term, patterns."""
from __future__ import annotations

from dataclasses import dataclass

from .config_integral import decompose, main_term_check
from .content import good_cube
from .curves import Curve
from .dyadic import DyadicSet, restrict_and_rescale
from .gridmeasure import frostman_ratio
from .measures import SpectralGapParams, spectral_gap_measure
from .patterns import PatternWitness, find_patterns, verify_witness


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception | str):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PipelineParams:
    T: int = 3
    tt: float = 0.9
    J: int = 0
    ell: int = 5
    sigma: float = 0.2
    B: float | None = None
    eps: float | None = None
    max_witnesses: int = 5
    t_mode: str = "dyadic"


def _stage(stages: list, name: str, passed: bool, **detail):
    stages.append({"stage": name, "passed": bool(passed), **detail})


def lift_witness(E: DyadicSet, Q, w: PatternWitness, curve: Curve) -> PatternWitness:
    """Map a witness (y, s, lambda) of T_Q(E ∩ Q) back to E.

    With q = width(Q): x = left(Q) + q y, t = q s and lambda' = lambda / q give
    x - gamma_lambda'(t) = left(Q) + q (y - gamma_lambda(s)).
    """
    scale = float(Q.width)
    left = float(Q.left)
    x = left + scale * w.x
    t = scale * w.t
    lam = w.lam / scale
    g = curve.scaled(lam)
    pts = (x, x - t, x - float(g(t)))
    sep = min(abs(pts[0] - pts[1]), abs(pts[0] - pts[2]), abs(pts[1] - pts[2]))
    n = E.params.ncells
    cells = tuple(min(int(p * n), n - 1) for p in pts)
    return PatternWitness(x, t, lam, pts, cells, sep)


def pipeline_endtoend(E: DyadicSet, curve: Curve, p: PipelineParams = PipelineParams()) -> dict:
    stages: list = []
    sg = SpectralGapParams(N=E.N, T=p.T, tt=p.tt, J=p.J)

    try:
        Q = good_cube(E, sg.s, sg.delta, p.J, max_level=E.L - p.T)
    except ValueError as exc:
        raise PipelineError("good_cube", exc) from exc
    if Q is None:
        raise PipelineError("good_cube", f"no cube with relative content >= 1 - {sg.delta:g} "
                                         f"at levels {p.J}..{E.L - p.T}")
    _stage(stages, "good_cube", True, cube=Q, s=sg.s, delta=sg.delta)

    try:
        mu, Q2, diag = spectral_gap_measure(E, sg)
    except Exception as exc:
        raise PipelineError("spectral_gap_measure", exc) from exc
    fr = frostman_ratio(mu, sg.s)
    _stage(stages, "spectral_gap_measure", abs(mu.total - 1.0) <= 1e-12 and fr <= 4.0 + 1e-9,
           total=mu.total, frostman_ratio=fr, diagnostics=diag.as_dict())

    A = 2.0 ** (p.ell - 3)
    B = p.B if p.B is not None else A ** 4
    eps = p.eps if p.eps is not None else 0.5 / B
    try:
        rep = decompose(mu, curve, p.ell, eps, A, B, p.sigma, p.tt)
    except Exception as exc:
        raise PipelineError("decompose", exc) from exc
    _stage(stages, "decompose", abs(rep.split_residual) <= 1e-10, report=rep.as_dict())

    try:
        mt = main_term_check(mu, curve, p.ell)
    except Exception as exc:
        raise PipelineError("main_term_check", exc) from exc
    _stage(stages, "main_term_check", mt.passed, main=mt.main, bound=mt.bound, A=mt.A)

    F = restrict_and_rescale(E, Q2)
    try:
        local = find_patterns(F, curve, max_results=p.max_witnesses, t_mode=p.t_mode)
    except Exception as exc:
        raise PipelineError("find_patterns", exc) from exc
    lifted = [lift_witness(E, Q2, w, curve) for w in local]
    verified = [verify_witness(E, w, curve) for w in lifted]
    _stage(stages, "find_patterns", bool(lifted) and all(verified),
           found=len(lifted), verified=sum(verified))

    return {
        "cube": Q2,
        "stages": stages,
        "passed": all(s["passed"] for s in stages),
        "witnesses": [w.as_row() for w in lifted],
        "witnesses_rescaled": [w.as_row() for w in local],
    }
