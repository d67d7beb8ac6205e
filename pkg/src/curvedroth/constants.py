"""Constants calibrated once on the uniform measure (curve t^2) and then frozen.

Each bound constant is twice the largest ratio |term| / shape over the
calibration runs of ``tools/calibrate.py``: ell in {4,5,6}, A in {2,4,8},
B = 4A, eps = 1/(2B), sigma = 0.2, tt = 0.9.  KAPPA is the exponent in
the 2^{kappa ell} growth factor and is a configurable guess, not derived.
"""

HF_TAIL_CONSTANT = 0.000467

KAPPA = 1.0

C_I1 = 0.489
C_II1 = 2.25
C_IV1 = 0.476
C_HIGH = 5.44e-06
