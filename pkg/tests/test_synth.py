import numpy as np
import pytest

from didea.errors import InvalidInputError
from didea.scoring import ScoringConfig, didea_score, theoretical_spectrum
from didea.spectra import bin_spectrum, preprocess
from didea.synth import (
    SynthParams,
    random_proteins,
    read_key,
    synthesize_corpus,
    synthesize_spectrum,
    write_key,
)


def test_params_validation():
    SynthParams(seed=1)
    with pytest.raises(InvalidInputError):
        SynthParams(seed=1, signal_peaks_fraction=1.5)
    with pytest.raises(InvalidInputError):
        SynthParams(seed=1, noise_peak_count=-1)
    with pytest.raises(InvalidInputError):
        SynthParams(seed=1, intensity_model="gaussian")
    with pytest.raises(InvalidInputError):
        SynthParams(seed=1, charge=4)


def test_determinism(peptide_factory):
    p = peptide_factory("LKNRS")
    params = SynthParams(seed=11, noise_peak_count=20, mz_jitter_sd=0.2)
    a = synthesize_spectrum(p, params)
    b = synthesize_spectrum(p, params)
    assert np.array_equal(a.mz, b.mz)
    assert np.array_equal(a.intensity, b.intensity)
    assert a.neutral_masses == b.neutral_masses
    c = synthesize_spectrum(p, SynthParams(seed=12, noise_peak_count=20,
                                           mz_jitter_sd=0.2))
    assert not np.array_equal(a.mz, c.mz)


def test_full_signal_matches_theoretical_bins(peptide_factory):
    """Noise-free, jitter-free output lands exactly on the theoretical bins."""
    p = peptide_factory("EAMKNR")
    params = SynthParams(seed=5, signal_peaks_fraction=1.0,
                         noise_peak_count=0, mz_jitter_sd=0.0, charge=2)
    s = synthesize_spectrum(p, params)
    observed_bins = np.flatnonzero(bin_spectrum(s.mz, np.ones(s.mz.size)))
    assert observed_bins.tolist() == theoretical_spectrum(p, 2).tolist()


def test_full_signal_charge3_covers_both_variants(peptide_factory):
    p = peptide_factory("EAMKNR")
    params = SynthParams(seed=5, charge=3)
    s = synthesize_spectrum(p, params)
    observed_bins = np.flatnonzero(bin_spectrum(s.mz, np.ones(s.mz.size)))
    assert observed_bins.tolist() == theoretical_spectrum(p, 3).tolist()
    assert s.charge_set == frozenset({3})


def test_zero_signal_is_all_noise(peptide_factory):
    p = peptide_factory("EAMK")
    s = synthesize_spectrum(p, SynthParams(seed=3, signal_peaks_fraction=0.0,
                                           noise_peak_count=17))
    assert s.n_peaks == 17
    assert np.all((s.mz >= 1.0) & (s.mz <= 2000.0))


def test_rank_biased_intensity_split(peptide_factory):
    """Signal intensities sit in the upper half, noise in the lower."""
    p = peptide_factory("EAMKNR")
    n_signal = 2 * (p.n - 1)
    s = synthesize_spectrum(p, SynthParams(seed=7, noise_peak_count=30,
                                           intensity_model="rank-biased"))
    signal, noise = s.intensity[:n_signal], s.intensity[n_signal:]
    assert np.all(signal > 0.5)
    assert np.all(noise <= 0.5)
    assert np.all(s.intensity > 0.0)


def test_uniform_intensity_model(peptide_factory):
    p = peptide_factory("EAMKNR")
    s = synthesize_spectrum(p, SynthParams(seed=7, noise_peak_count=30,
                                           intensity_model="uniform"))
    assert np.all((s.intensity > 0.0) & (s.intensity <= 1.0))


def test_precursor_noise_keeps_true_peptide_in_window(peptide_factory):
    p = peptide_factory("LKNRS")
    for seed in range(30):
        params = SynthParams(seed=seed, precursor_mass_window=3.0)
        s = synthesize_spectrum(p, params)
        # within half the window, so a +-window search always admits it
        assert abs(s.neutral_masses[2] - p.neutral_mass) < 1.5


def test_length_one_rejected(peptide_factory):
    with pytest.raises(InvalidInputError):
        synthesize_spectrum(peptide_factory("G"), SynthParams(seed=1))


def test_jitter_moves_peaks(peptide_factory):
    p = peptide_factory("EAMK")
    crisp = synthesize_spectrum(p, SynthParams(seed=9, mz_jitter_sd=0.0))
    fuzzy = synthesize_spectrum(p, SynthParams(seed=9, mz_jitter_sd=0.3))
    assert crisp.n_peaks == fuzzy.n_peaks
    assert not np.array_equal(crisp.mz, fuzzy.mz)
    # jitter-free ion positions are exact integers at charge 2
    assert np.array_equal(crisp.mz, np.round(crisp.mz))


def test_true_peptide_beats_disjoint_candidate(peptide_factory):
    """Full-signal spectra prefer their source over bin-disjoint peptides."""
    true = peptide_factory("LKNR")
    other = peptide_factory("GGGGC")
    true_bins = set(theoretical_spectrum(true, 2).tolist())
    other_bins = set(theoretical_spectrum(other, 2).tolist())
    assert not (true_bins & other_bins)
    s = preprocess(synthesize_spectrum(true, SynthParams(seed=21)))
    cfg = ScoringConfig()
    assert didea_score(s, true, cfg) > didea_score(s, other, cfg)


def test_corpus_and_key(peptide_factory, tmp_path):
    peptides = [peptide_factory(seq) for seq in ("LKNR", "EAMK", "GGWK")]
    params = SynthParams(seed=31, noise_peak_count=5)
    spectra, key = synthesize_corpus(peptides, params)
    assert [s.spectrum_id for s in spectra] == \
        ["synth-00000", "synth-00001", "synth-00002"]
    assert [seq for _, seq in key] == ["LKNR", "EAMK", "GGWK"]

    again, _ = synthesize_corpus(peptides, params)
    for a, b in zip(spectra, again):
        assert np.array_equal(a.mz, b.mz)

    path = tmp_path / "key.tsv"
    write_key(key, path, config={"seed": 31})
    loaded = read_key(path)
    assert loaded == {sid: seq for sid, seq in key}


def test_random_proteins_deterministic():
    a = random_proteins(seed=2, n_proteins=5, min_length=50, max_length=60)
    b = random_proteins(seed=2, n_proteins=5, min_length=50, max_length=60)
    assert a == b
    assert len(a) == 5
    for header, seq in a:
        assert 50 <= len(seq) <= 60
        assert set(seq) <= set("ACDEFGHIKLMNPQRSTVWY")
