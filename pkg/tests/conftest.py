import numpy as np
import pytest

from didea.chem import ResidueMassTable, build_ladders
from didea.spectra import (
    DEFAULT_LAMBDA,
    DEFAULT_N_BINS,
    ProcessedSpectrum,
    RawSpectrum,
    f_lambda,
    preprocess,
)


@pytest.fixture(scope="session")
def mass_table():
    return ResidueMassTable.default()


@pytest.fixture(scope="session")
def peptide_factory(mass_table):
    def make(sequence):
        return build_ladders(sequence, mass_table)
    return make


def make_processed(mz, intensity, charge_set={2}, neutral=None, sid="s",
                   n_bins=DEFAULT_N_BINS, lam=DEFAULT_LAMBDA):
    if neutral is None:
        neutral = {z: 1000.0 for z in charge_set}
    raw = RawSpectrum(sid, np.asarray(mz, float), np.asarray(intensity, float),
                      frozenset(charge_set), neutral)
    return preprocess(raw, n_bins=n_bins, lam=lam)


def make_constant_spectrum(value, charge_set={2}, neutral=None, sid="flat",
                           n_bins=DEFAULT_N_BINS, lam=DEFAULT_LAMBDA):
    """A spectrum whose binned vector is the same value in every bin.

    Unreachable through preprocess (rank normalization forbids ties), so
    built directly; used to probe shift-invariance identities.
    """
    if neutral is None:
        neutral = {z: 1000.0 for z in charge_set}
    binned = np.full(n_bins + 1, float(value))
    binned[0] = 0.0
    weights = f_lambda(binned, lam)
    return ProcessedSpectrum(
        spectrum_id=sid, charge_set=frozenset(charge_set),
        neutral_masses=neutral, binned=binned, weights=weights,
        log_weights=np.log(weights), n_bins=n_bins, lam=lam)


def random_raw_spectrum(rng, charge_set={2}, n_peaks=None, neutral=None, sid="r"):
    if n_peaks is None:
        n_peaks = int(rng.integers(5, 30))
    mz = rng.uniform(50.0, 700.0, size=n_peaks)
    intensity = rng.uniform(1.0, 100.0, size=n_peaks)
    if neutral is None:
        neutral = {z: float(rng.uniform(300.0, 1200.0)) for z in charge_set}
    return RawSpectrum(sid, mz, intensity, frozenset(charge_set), neutral)


def random_peptide(rng, min_len=2, max_len=5, alphabet="ACDEFGHIKLMNPQRSTVWY"):
    n = int(rng.integers(min_len, max_len + 1))
    letters = rng.choice(np.array(list(alphabet)), size=n)
    return "".join(letters)
