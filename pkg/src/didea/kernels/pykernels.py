"""Reference numpy implementations of the hot scoring loops.

These define the semantics; the compiled extension in `_ckernels` mirrors
them operation for operation. All bin arrays are int64, all weight vectors
are float64 of length n_bins + 1 with index 0 unused.

Shift conventions differ between the two scorers on purpose: the
probabilistic kernels clamp shifted bins into [1, n_bins], while the
correlation kernel treats out-of-range shifted bins as zero contribution.
"""

import numpy as np


def _as_bins(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _shift_matrix(bins, shift_max):
    shifts = np.arange(-shift_max, shift_max + 1, dtype=np.int64)
    return bins[None, :] + shifts[:, None]


def shift_profile_sum_log(bins_b, bins_y, log_weights, shift_max):
    """Per-shift sum of log-weights at singly charged fragment bins.

    Returns a float64 vector a of length 2*shift_max + 1 where
    a[shift_max + tau] = sum_t lw[clamp(b_t + tau)] + lw[clamp(y_t + tau)].
    """
    bins_b = _as_bins(bins_b)
    bins_y = _as_bins(bins_y)
    log_weights = np.asarray(log_weights, dtype=np.float64)
    n_bins = log_weights.size - 1
    ib = np.clip(_shift_matrix(bins_b, shift_max), 1, n_bins)
    iy = np.clip(_shift_matrix(bins_y, shift_max), 1, n_bins)
    return log_weights[ib].sum(axis=1) + log_weights[iy].sum(axis=1)


def shift_profile_split_charge(bins_b1, bins_y1, bins_b2, bins_y2,
                               weights, shift_max):
    """Per-shift log-likelihood with a two-way fragment-charge mixture.

    Each frame contributes log(0.5*w[b1]*w[y1] + 0.5*w[b2]*w[y2]) where the
    two (b, y) pairs are the caller's chosen fragment-charge pairings and
    all indices are shifted then clamped. `weights` holds linear (not log)
    weights.
    """
    bins_b1, bins_y1 = _as_bins(bins_b1), _as_bins(bins_y1)
    bins_b2, bins_y2 = _as_bins(bins_b2), _as_bins(bins_y2)
    weights = np.asarray(weights, dtype=np.float64)
    n_bins = weights.size - 1

    def w(bins):
        return weights[np.clip(_shift_matrix(bins, shift_max), 1, n_bins)]

    frame = 0.5 * w(bins_b1) * w(bins_y1) + 0.5 * w(bins_b2) * w(bins_y2)
    return np.log(frame).sum(axis=1)


def shift_profile_single_proton(bins_b, bins_y, weights, shift_max):
    """Per-shift log-likelihood with an even mixture over the two series.

    Each frame contributes log(0.5*w[b] + 0.5*w[y]); used when only one
    proton is available so a fragment pair cannot both be charged.
    """
    bins_b, bins_y = _as_bins(bins_b), _as_bins(bins_y)
    weights = np.asarray(weights, dtype=np.float64)
    n_bins = weights.size - 1
    ib = np.clip(_shift_matrix(bins_b, shift_max), 1, n_bins)
    iy = np.clip(_shift_matrix(bins_y, shift_max), 1, n_bins)
    return np.log(0.5 * weights[ib] + 0.5 * weights[iy]).sum(axis=1)


def shifted_theoretical_correlations(phi_bins, binned, shift_range):
    """Dot products of the observed vector with every shifted indicator set.

    Returns c of length 2*shift_range + 1 with
    c[shift_range + tau] = sum_j binned[phi_j + tau], where shifted indices
    falling outside [1, n_bins] contribute nothing.
    """
    phi_bins = _as_bins(phi_bins)
    binned = np.asarray(binned, dtype=np.float64)
    n_bins = binned.size - 1
    idx = _shift_matrix(phi_bins, shift_range)
    valid = (idx >= 1) & (idx <= n_bins)
    vals = binned[np.where(valid, idx, 0)]
    vals[~valid] = 0.0
    return vals.sum(axis=1)
