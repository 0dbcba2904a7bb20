"""Backend agreement: the compiled kernels must match the numpy reference."""

import numpy as np
import pytest

import didea.kernels as kernels
from didea.kernels import pykernels

compiled = pytest.importorskip(
    "didea.kernels._ckernels", reason="compiled kernels not built")


def _random_inputs(rng, n_frag=15, n_bins=2000):
    lw = np.abs(rng.normal(0.0, 0.08, n_bins + 1))
    lw[0] = 0.0
    bins = lambda: rng.integers(1, n_bins + 1, size=n_frag).astype(np.int64)
    return lw, np.exp(lw), bins


@pytest.mark.parametrize("seed", range(5))
def test_sum_log_parity(seed):
    rng = np.random.default_rng(seed)
    lw, _, bins = _random_inputs(rng)
    bb, by = bins(), bins()
    a = compiled.shift_profile_sum_log(bb, by, lw, 37)
    b = pykernels.shift_profile_sum_log(bb, by, lw, 37)
    assert np.max(np.abs(a - b)) <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_split_charge_parity(seed):
    rng = np.random.default_rng(seed)
    _, w, bins = _random_inputs(rng)
    args = (bins(), bins(), bins(), bins(), w, 37)
    a = compiled.shift_profile_split_charge(*args)
    b = pykernels.shift_profile_split_charge(*args)
    assert np.max(np.abs(a - b)) <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_single_proton_parity(seed):
    rng = np.random.default_rng(seed)
    _, w, bins = _random_inputs(rng)
    bb, by = bins(), bins()
    a = compiled.shift_profile_single_proton(bb, by, w, 37)
    b = pykernels.shift_profile_single_proton(bb, by, w, 37)
    assert np.max(np.abs(a - b)) <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_correlation_parity(seed):
    rng = np.random.default_rng(seed)
    _, _, bins = _random_inputs(rng)
    binned = rng.random(2001)
    binned[0] = 0.0
    phi = bins()
    a = compiled.shifted_theoretical_correlations(phi, binned, 75)
    b = pykernels.shifted_theoretical_correlations(phi, binned, 75)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_empty_fragment_arrays():
    lw = np.zeros(2001)
    empty = np.zeros(0, dtype=np.int64)
    for impl in (compiled, pykernels):
        assert np.all(impl.shift_profile_sum_log(empty, empty, lw, 37) == 0.0)
        assert np.all(impl.shifted_theoretical_correlations(empty, lw, 75) == 0.0)


def test_clamping_vs_zeroing_boundary():
    """The probabilistic kernels clamp; the correlation kernel drops."""
    lw = np.zeros(2001)
    lw[1] = 0.5
    bins = np.array([1], dtype=np.int64)
    for impl in (compiled, pykernels):
        a = impl.shift_profile_sum_log(bins, bins, lw, 37)
        # shifting below bin 1 clamps back onto bin 1
        assert a[0] == 1.0
        c = impl.shifted_theoretical_correlations(bins, lw, 75)
        # shifting below bin 1 contributes nothing
        assert c[0] == 0.0
        assert c[75] == 0.5


def test_backend_reports():
    assert kernels.BACKEND in ("cython", "numpy")
