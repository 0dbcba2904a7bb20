"""Target-decoy statistics: empirical p-values, q-values, ranking curves.

Decoy best scores act as samples from the null score distribution. All
functions are pure and operate on in-memory score arrays; file output keeps
the same 6-decimal float convention as the PSM writer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

DEFAULT_CURVE_GRID = np.linspace(0.0, 0.1, 101)


def empirical_pvalues(target_scores, decoy_scores, smoothed: bool = False):
    """Fraction of decoy scores strictly exceeding each target score.

    The default is the plain fraction (a target above every decoy gets an
    exact 0); `smoothed` applies the add-one correction (1 + exceed) /
    (1 + n) that keeps p-values off both endpoints.
    """
    t = np.asarray(target_scores, dtype=np.float64)
    d = np.asarray(decoy_scores, dtype=np.float64)
    if d.size == 0:
        raise InvalidInputError("empirical p-values need at least one decoy score")
    d_sorted = np.sort(d)
    exceed = d.size - np.searchsorted(d_sorted, t, side="right")
    if smoothed:
        return (1.0 + exceed) / (1.0 + d.size)
    return exceed / d.size


def qvalues(target_scores, decoy_scores, pi0: float = 1.0):
    """Monotonized decoy-based FDR estimate per target score.

    At each target-score threshold c, FDR(c) is the decoy/target count
    ratio #{decoys >= c} / #{targets >= c}, scaled by pi0 and capped at 1;
    the q-value of a target is the minimum FDR over all thresholds at or
    below its score, so acceptance sets nest. `pi0` rescales the estimate
    for callers with an external estimate of the true-null proportion; the
    default 1.0 applies no correction.
    """
    t = np.asarray(target_scores, dtype=np.float64)
    d = np.asarray(decoy_scores, dtype=np.float64)
    if t.size == 0:
        raise InvalidInputError("q-values need at least one target score")
    if d.size == 0:
        raise InvalidInputError("q-values need at least one decoy score")

    order = np.argsort(-t, kind="stable")
    ts = t[order]
    decoys_ge = d.size - np.searchsorted(np.sort(d), ts, side="left")
    targets_ge = t.size - np.searchsorted(np.sort(t), ts, side="left")
    fdr = np.minimum(pi0 * decoys_ge / targets_ge, 1.0)
    q_desc = np.minimum.accumulate(fdr[::-1])[::-1]
    q = np.empty_like(q_desc)
    q[order] = q_desc
    return q


def ranking_curve(q_values, grid=None):
    """Accepted-PSM counts over a grid of q-value thresholds.

    Returns a list of (threshold, count) pairs where count is the number of
    targets with q <= threshold. The grid must be sorted ascending and lie
    in [0, 1].
    """
    if grid is None:
        grid = DEFAULT_CURVE_GRID
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size and (np.any(np.diff(grid) < 0)
                      or grid[0] < 0.0 or grid[-1] > 1.0):
        raise InvalidInputError("grid must be ascending within [0, 1]")
    q = np.sort(np.asarray(q_values, dtype=np.float64))
    counts = np.searchsorted(q, grid, side="right")
    return [(float(g), int(c)) for g, c in zip(grid, counts)]


@dataclass
class EvalTable:
    """Per-target-PSM statistics plus the acceptance curve."""

    rows: list[tuple[str, float, float, float]]  # (spectrum_id, score, p, q)
    curve: list[tuple[float, int]]


def make_eval_table(target_psms, decoy_psms, grid=None,
                    smoothed: bool = False, pi0: float = 1.0) -> EvalTable:
    """Assemble the evaluation table from two PSM lists.

    The decoy PSMs' scores are pooled into one null sample regardless of
    which spectrum produced them.
    """
    t_scores = [p.score for p in target_psms]
    d_scores = [p.score for p in decoy_psms]
    pvals = empirical_pvalues(t_scores, d_scores, smoothed=smoothed)
    qvals = qvalues(t_scores, d_scores, pi0=pi0)
    rows = [(p.spectrum_id, p.score, float(pv), float(qv))
            for p, pv, qv in zip(target_psms, pvals, qvals)]
    return EvalTable(rows=rows, curve=ranking_curve(qvals, grid))


def write_eval_table(table: EvalTable, path, config: dict | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if config is not None:
            fh.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
        fh.write("spectrum_id\tscore\tp_value\tq_value\n")
        for sid, score, p, q in table.rows:
            fh.write(f"{sid}\t{score:.6f}\t{p:.6f}\t{q:.6f}\n")


def write_curve(curve, path, config: dict | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if config is not None:
            fh.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
        fh.write("q_threshold,accepted_count\n")
        for threshold, count in curve:
            fh.write(f"{threshold:.6f},{count}\n")
