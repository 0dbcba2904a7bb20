import numpy as np
import pytest
from scipy import stats

from didea.errors import InvalidInputError
from didea.evaluate import (
    EvalTable,
    empirical_pvalues,
    make_eval_table,
    qvalues,
    ranking_curve,
    write_curve,
    write_eval_table,
)
from didea.search import PSM


def test_pvalue_fixture():
    p = empirical_pvalues([3.5], [1.0, 2.0, 3.0, 4.0])
    assert p.tolist() == [0.25]


def test_pvalue_extremes():
    assert empirical_pvalues([10.0], [1.0, 2.0]).tolist() == [0.0]
    assert empirical_pvalues([0.0], [1.0, 2.0]).tolist() == [1.0]
    # ties are not exceedances (strict inequality)
    assert empirical_pvalues([2.0], [1.0, 2.0]).tolist() == [0.0]
    assert empirical_pvalues([1.9], [1.0, 2.0]).tolist() == [0.5]


def test_pvalue_smoothed():
    p = empirical_pvalues([10.0, 0.0], [1.0, 2.0, 3.0], smoothed=True)
    assert p.tolist() == [0.25, 1.0]


def test_pvalue_requires_decoys():
    with pytest.raises(InvalidInputError):
        empirical_pvalues([1.0], [])


def test_qvalue_fixture():
    q = qvalues([10.0, 8.0, 6.0, 4.0], [9.0, 5.0, 3.0, 1.0])
    assert q.tolist() == [0.0, 1 / 3, 1 / 3, 0.5]


def test_qvalue_fixture_any_input_order():
    q = qvalues([4.0, 10.0, 8.0, 6.0], [9.0, 5.0, 3.0, 1.0])
    assert q.tolist() == [0.5, 0.0, 1 / 3, 1 / 3]


def test_qvalues_zero_when_no_decoy_competes():
    q = qvalues([10.0, 9.0], [1.0, 2.0])
    assert q.tolist() == [0.0, 0.0]


def test_qvalues_reach_one_on_identical_multisets():
    scores = [5.0, 3.0, 1.0]
    q = qvalues(scores, scores)
    assert q[-1] == 1.0


def test_qvalues_affine_invariance():
    rng = np.random.default_rng(13)
    t = rng.normal(1.0, 2.0, 200)
    d = rng.normal(0.0, 2.0, 200)
    q1 = qvalues(t, d)
    q2 = qvalues(2.0 * t + 7.0, 2.0 * d + 7.0)
    assert np.allclose(q1, q2, atol=0)


def test_qvalues_monotone_in_score():
    rng = np.random.default_rng(14)
    t = rng.normal(1.0, 2.0, 300)
    d = rng.normal(0.0, 2.0, 300)
    q = qvalues(t, d)
    order = np.argsort(-t)
    assert np.all(np.diff(q[order]) >= 0)


def test_qvalue_never_exceeds_own_fdr():
    rng = np.random.default_rng(15)
    t = rng.normal(1.0, 2.0, 100)
    d = rng.normal(0.0, 2.0, 100)
    q = qvalues(t, d)
    for v, qv in zip(t, q):
        fdr = min(np.sum(d >= v) / np.sum(t >= v), 1.0)
        assert qv <= fdr + 1e-15


def test_qvalues_require_both_lists():
    with pytest.raises(InvalidInputError):
        qvalues([], [1.0])
    with pytest.raises(InvalidInputError):
        qvalues([1.0], [])


def test_null_pvalues_are_uniform():
    """Targets drawn from the decoy distribution give ~uniform p-values."""
    rng = np.random.default_rng(99)
    decoys = rng.normal(0.0, 1.0, 1000)
    targets = rng.normal(0.0, 1.0, 1000)
    p = empirical_pvalues(targets, decoys)
    ks = stats.kstest(p, "uniform").statistic
    assert ks < 0.1


def test_ranking_curve_fixture():
    q = [0.0, 1 / 3, 1 / 3, 0.5]
    assert ranking_curve(q, [0.05]) == [(0.05, 1)]
    assert ranking_curve(q, [1.0]) == [(1.0, 4)]
    assert ranking_curve([], [0.0, 0.1]) == [(0.0, 0), (0.1, 0)]


def test_ranking_curve_default_grid_monotone():
    rng = np.random.default_rng(16)
    q = rng.uniform(0, 0.2, 50)
    curve = ranking_curve(q)
    assert len(curve) == 101
    counts = [c for _, c in curve]
    assert counts == sorted(counts)


def test_ranking_curve_rejects_bad_grid():
    with pytest.raises(InvalidInputError):
        ranking_curve([0.1], [0.2, 0.1])
    with pytest.raises(InvalidInputError):
        ranking_curve([0.1], [-0.5, 0.1])


def _psm(sid, score, decoy=False):
    return PSM(sid, "PEPK", score, "didea", "mixture", decoy, 5)


def test_make_eval_table():
    targets = [_psm("s1", 10.0), _psm("s2", 8.0), _psm("s3", 6.0), _psm("s4", 4.0)]
    decoys = [_psm(f"d{i}", v, decoy=True) for i, v in enumerate([9.0, 5.0, 3.0, 1.0])]
    table = make_eval_table(targets, decoys, grid=[0.0, 0.4, 1.0])
    assert [r[3] for r in table.rows] == [0.0, 1 / 3, 1 / 3, 0.5]
    assert table.curve == [(0.0, 1), (0.4, 3), (1.0, 4)]
    # rows sorted by descending score have non-decreasing q
    rows = sorted(table.rows, key=lambda r: -r[1])
    qs = [r[3] for r in rows]
    assert qs == sorted(qs)


def test_eval_writers(tmp_path):
    table = EvalTable(rows=[("s1", 1.25, 0.1, 0.05)], curve=[(0.01, 3)])
    tsv = tmp_path / "eval.tsv"
    csv = tmp_path / "curve.csv"
    write_eval_table(table, tsv, config={"delta": 3.0})
    write_curve(table.curve, csv, config={"delta": 3.0})
    tsv_text = tsv.read_text()
    assert tsv_text.startswith("# config: ")
    assert "s1\t1.250000\t0.100000\t0.050000" in tsv_text
    csv_text = csv.read_text()
    assert "q_threshold,accepted_count" in csv_text
    assert "0.010000,3" in csv_text
