"""Seeded synthetic spectra from known peptides.

Real instruments cannot produce spectra with certified ground truth, so the
benchmark harness manufactures them: fragment ions of a known peptide, a
controllable amount of uniform noise, and a precursor mass wobble small
enough that the true peptide always survives candidate selection.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from .chem import Peptide, WATER_MASS_DA
from .errors import InvalidInputError
from .spectra import RawSpectrum

AMINO_ALPHABET = "ACDEFGHIKLMNPQRSTVWY"


@dataclass(frozen=True)
class SynthParams:
    seed: int
    signal_peaks_fraction: float = 1.0
    noise_peak_count: int = 0
    mz_jitter_sd: float = 0.0
    intensity_model: str = "rank-biased"
    charge: int = 2
    precursor_mass_window: float = 3.0

    def __post_init__(self):
        if not 0.0 <= self.signal_peaks_fraction <= 1.0:
            raise InvalidInputError("signal_peaks_fraction must lie in [0, 1]")
        if self.noise_peak_count < 0:
            raise InvalidInputError("noise_peak_count must be >= 0")
        if self.mz_jitter_sd < 0:
            raise InvalidInputError("mz_jitter_sd must be >= 0")
        if self.intensity_model not in ("uniform", "rank-biased"):
            raise InvalidInputError(
                f"unknown intensity model {self.intensity_model!r}")
        if self.charge not in (1, 2, 3):
            raise InvalidInputError("charge must be 1, 2, or 3")
        if self.precursor_mass_window <= 0:
            raise InvalidInputError("precursor_mass_window must be positive")


def _candidate_ion_mz(peptide: Peptide, charge: int) -> np.ndarray:
    """Exact m/z values of every fragment ion the charge state can emit.

    Charges 1 and 2 produce singly charged fragments; charge 3 splits its
    protons across the pair, so both singly and doubly charged variants of
    both series appear.
    """
    prefix = peptide.prefix_masses[1:-1].astype(np.float64)
    suffix = peptide.suffix_masses[1:-1].astype(np.float64)
    frag_charges = (1,) if charge in (1, 2) else (1, 2)
    parts = []
    for xi in frag_charges:
        parts.append((prefix + xi) / xi)
        parts.append((suffix + WATER_MASS_DA + xi) / xi)
    return np.concatenate(parts)


def _intensities(rng, count, model, kind):
    # 1 - random() lies in (0, 1]: intensities are never exactly zero
    u = 1.0 - rng.random(count)
    if model == "uniform":
        return u
    return 0.5 + 0.5 * u if kind == "signal" else 0.5 * u


def synthesize_spectrum(peptide: Peptide, params: SynthParams,
                        spectrum_id: str = "synth-0") -> RawSpectrum:
    """Generate one spectrum whose true peptide is known.

    The random stream is consumed in a fixed order (signal subset, jitter,
    signal intensities, noise m/z, noise intensities, precursor offset), so
    output is a pure function of (peptide, params).
    """
    if peptide.n < 2:
        raise InvalidInputError("synthesis needs a peptide with at least one "
                                "cleavage site (length >= 2)")
    rng = np.random.Generator(np.random.PCG64(params.seed))

    ions = _candidate_ion_mz(peptide, params.charge)
    keep = rng.random(ions.size) < params.signal_peaks_fraction
    signal_mz = ions[keep] + rng.normal(0.0, params.mz_jitter_sd,
                                        size=int(keep.sum()))
    signal_intensity = _intensities(rng, signal_mz.size,
                                    params.intensity_model, "signal")
    noise_mz = rng.uniform(1.0, 2000.0, size=params.noise_peak_count)
    noise_intensity = _intensities(rng, params.noise_peak_count,
                                   params.intensity_model, "noise")

    half = params.precursor_mass_window / 2.0
    neutral = float(peptide.neutral_mass) + float(rng.uniform(-half, half))

    return RawSpectrum(
        spectrum_id=spectrum_id,
        mz=np.concatenate([signal_mz, noise_mz]),
        intensity=np.concatenate([signal_intensity, noise_intensity]),
        charge_set=frozenset({params.charge}),
        neutral_masses={params.charge: neutral},
    )


def synthesize_corpus(peptides: list[Peptide], params: SynthParams,
                      id_prefix: str = "synth"):
    """Spectra for a list of peptides, plus the (id, true peptide) key rows.

    Each spectrum gets its own generator seeded by seed XOR index, so any
    subset can be regenerated independently.
    """
    spectra = []
    key = []
    for i, peptide in enumerate(peptides):
        derived = dataclasses.replace(params, seed=params.seed ^ i)
        sid = f"{id_prefix}-{i:05d}"
        spectra.append(synthesize_spectrum(peptide, derived, spectrum_id=sid))
        key.append((sid, peptide.sequence))
    return spectra, key


def write_key(key_rows, path, config: dict | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if config is not None:
            fh.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
        fh.write("spectrum_id\ttrue_peptide\n")
        for sid, seq in key_rows:
            fh.write(f"{sid}\t{seq}\n")


def read_key(path) -> dict[str, str]:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#") or line.startswith("spectrum_id\t"):
                continue
            sid, seq = line.split("\t")
            out[sid] = seq
    return out


def random_proteins(seed: int, n_proteins: int, min_length: int = 80,
                    max_length: int = 400,
                    alphabet: str = AMINO_ALPHABET) -> list[tuple[str, str]]:
    """Random proteome for benchmarks: (header, sequence) FASTA records."""
    rng = np.random.Generator(np.random.PCG64(seed))
    letters = np.array(list(alphabet))
    records = []
    for i in range(n_proteins):
        n = int(rng.integers(min_length, max_length + 1))
        records.append((f"random-{i:04d}", "".join(rng.choice(letters, size=n))))
    return records
