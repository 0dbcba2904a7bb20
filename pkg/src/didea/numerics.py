"""Small numeric helpers used across the scoring stack."""

import numpy as np


def round_half_up(x):
    """Round to the nearest integer with halves rounding up.

    Every mass-to-bin mapping in the package goes through this helper so the
    observed and theoretical sides of a spectrum quantize identically.
    Accepts scalars or arrays; returns int / int64 ndarray. Inputs are
    nonnegative here, so half-up and half-away-from-zero coincide.
    """
    if np.isscalar(x):
        return int(np.floor(x + 0.5))
    return np.floor(np.asarray(x) + 0.5).astype(np.int64)


def logsumexp(a):
    """Stable log(sum(exp(a))) over a 1-D array of finite values."""
    a = np.asarray(a, dtype=np.float64)
    m = a.max()
    return float(m + np.log(np.exp(a - m).sum()))
