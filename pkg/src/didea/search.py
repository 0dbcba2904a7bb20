"""Database search: candidate selection, best-match extraction, PSM files.

A spectrum is searched independently against the target and decoy
databases; each search scores every candidate peptide whose neutral mass
falls inside the precursor window and keeps the single best match (ties go
to the lexicographically smallest sequence so results are reproducible).
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .chem import Peptide, PeptideDatabase
from .errors import ConfigError, InvalidInputError, ParseError
from .scoring import (
    ScoringConfig,
    didea_score,
    model_label,
    resolve_charge_model,
    xcorr_score,
)
from .spectra import ProcessedSpectrum

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 3.0


@dataclass(frozen=True)
class PSM:
    """One scored peptide-spectrum match."""

    spectrum_id: str
    peptide: str
    score: float
    scorer: str
    charge_model: str
    is_decoy: bool
    candidate_count: int


@dataclass(frozen=True)
class SearchSettings:
    """Everything run_search needs beyond the two databases."""

    scoring: ScoringConfig = ScoringConfig()
    delta: float = DEFAULT_DELTA
    scorer: str = "didea"
    charge_mode: str = "mixture"
    fixed_charge: int | None = None
    threads: int = 1
    top_k: int = 1

    def __post_init__(self):
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        if self.scorer not in ("didea", "xcorr"):
            raise ConfigError(f"unknown scorer {self.scorer!r}")
        if self.charge_mode not in ("mixture", "max", "fixed"):
            raise ConfigError(f"unknown charge_mode {self.charge_mode!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")


def select_candidates(db: PeptideDatabase, precursor_neutral_mass: float,
                      delta: float = DEFAULT_DELTA) -> list[Peptide]:
    """Peptides whose neutral mass lies strictly within delta of the precursor.

    Single-residue peptides are excluded: they have no fragments, so every
    scorer is uninformative on them.
    """
    lo = precursor_neutral_mass - delta
    hi = precursor_neutral_mass + delta
    out = []
    for p in db.peptides_in_mass_window(lo, hi):
        if abs(p.neutral_mass - precursor_neutral_mass) < delta and p.n >= 2:
            out.append(p)
    return out


def _candidates_for_spectrum(spectrum: ProcessedSpectrum, db: PeptideDatabase,
                             delta: float) -> list[Peptide]:
    """Union of the per-charge candidate windows, ordered by sequence.

    Each declared precursor charge implies its own neutral mass and hence
    its own window; a peptide is a candidate if any window admits it.
    """
    seen: dict[str, Peptide] = {}
    for z in sorted(spectrum.charge_set):
        for p in select_candidates(db, spectrum.neutral_masses[z], delta):
            seen.setdefault(p.sequence, p)
    return [seen[s] for s in sorted(seen)]


def _score_one(spectrum: ProcessedSpectrum, peptide: Peptide,
               settings: SearchSettings) -> float:
    if settings.scorer == "didea":
        return didea_score(spectrum, peptide, settings.scoring,
                           charge_mode=settings.charge_mode,
                           fixed_charge=settings.fixed_charge)
    fc = settings.fixed_charge if settings.charge_mode == "fixed" else None
    return xcorr_score(spectrum, peptide, settings.scoring, fixed_charge=fc)


def _charge_label(spectrum: ProcessedSpectrum, settings: SearchSettings) -> str:
    mode = settings.charge_mode
    if settings.scorer == "xcorr" and mode != "fixed":
        mode = "max"
    return model_label(resolve_charge_model(
        spectrum.charge_set, mode, settings.fixed_charge))


def search_spectrum(spectrum: ProcessedSpectrum, db: PeptideDatabase,
                    settings: SearchSettings = SearchSettings()) -> list[PSM]:
    """Score all candidates for one spectrum; best matches first.

    Returns up to settings.top_k PSMs sorted by descending score (then
    ascending sequence), or an empty list when no candidate survives the
    precursor window.
    """
    candidates = _candidates_for_spectrum(spectrum, db, settings.delta)
    if not candidates:
        return []
    label = _charge_label(spectrum, settings)
    is_decoy = db.provenance != "target"
    scored = [(_score_one(spectrum, p, settings), p.sequence)
              for p in candidates]
    scored.sort(key=lambda sp: (-sp[0], sp[1]))
    return [PSM(spectrum_id=spectrum.spectrum_id, peptide=seq, score=score,
                scorer=settings.scorer, charge_model=label, is_decoy=is_decoy,
                candidate_count=len(candidates))
            for score, seq in scored[:settings.top_k]]


@dataclass
class SearchResult:
    target_psms: list[PSM]
    decoy_psms: list[PSM]
    unmatched: list[tuple[str, str]]  # (spectrum_id, database provenance)


def run_search(spectra: list[ProcessedSpectrum], target_db: PeptideDatabase,
               decoy_db: PeptideDatabase,
               settings: SearchSettings = SearchSettings()) -> SearchResult:
    """Search every spectrum against both databases.

    Results keep the input spectrum order no matter how many worker threads
    run; the whole call is a pure function of its inputs.
    """
    overlap = target_db.sequences() & decoy_db.sequences()
    if overlap:
        raise InvalidInputError(
            f"target and decoy databases share {len(overlap)} sequence(s)")
    for s in spectra:
        if s.lam != settings.scoring.lam or s.n_bins != settings.scoring.n_bins:
            raise ConfigError(
                f"spectrum {s.spectrum_id} was preprocessed with "
                f"(lambda={s.lam}, bins={s.n_bins}) but the search is "
                f"configured for (lambda={settings.scoring.lam}, "
                f"bins={settings.scoring.n_bins})")

    def work(spectrum):
        return (search_spectrum(spectrum, target_db, settings),
                search_spectrum(spectrum, decoy_db, settings))

    if settings.threads == 1:
        results = [work(s) for s in spectra]
    else:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            results = list(pool.map(work, spectra))

    out = SearchResult([], [], [])
    for spectrum, (t_psms, d_psms) in zip(spectra, results):
        out.target_psms.extend(t_psms)
        out.decoy_psms.extend(d_psms)
        if not t_psms:
            out.unmatched.append((spectrum.spectrum_id, "target"))
        if not d_psms:
            out.unmatched.append((spectrum.spectrum_id, decoy_db.provenance))
    return out


PSM_COLUMNS = ("spectrum_id", "peptide", "score", "scorer", "charge_model",
               "is_decoy", "candidate_count")


def write_psms(psms: list[PSM], path, config: dict | None = None):
    """Write PSMs as TSV; the resolved config rides along as a comment."""
    with open(path, "w", encoding="utf-8") as fh:
        if config is not None:
            fh.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
        fh.write("\t".join(PSM_COLUMNS) + "\n")
        for p in psms:
            fh.write(f"{p.spectrum_id}\t{p.peptide}\t{p.score:.6f}\t{p.scorer}"
                     f"\t{p.charge_model}\t{str(p.is_decoy).lower()}"
                     f"\t{p.candidate_count}\n")


def read_psms(path) -> list[PSM]:
    psms = []
    with open(path, "r", encoding="utf-8") as fh:
        header = None
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split("\t")
                if tuple(header) != PSM_COLUMNS:
                    raise ParseError(f"unexpected PSM header {header}",
                                     path=path, line=line_no)
                continue
            parts = line.split("\t")
            if len(parts) != len(PSM_COLUMNS):
                raise ParseError(f"wrong column count in {line!r}",
                                 path=path, line=line_no)
            try:
                psms.append(PSM(
                    spectrum_id=parts[0], peptide=parts[1],
                    score=float(parts[2]), scorer=parts[3],
                    charge_model=parts[4], is_decoy=parts[5] == "true",
                    candidate_count=int(parts[6])))
            except ValueError:
                raise ParseError(f"bad PSM row {line!r}",
                                 path=path, line=line_no) from None
    return psms
