"""Observed-spectrum handling: file parsing, normalization, binning, weighting.

A spectrum moves through three representations:

  RawSpectrum        peaks as read from disk, plus precursor information
  rank-normalized    intensities replaced by their normalized ranks in (0, 1]
  ProcessedSpectrum  fixed-size bin vectors ready for scoring

Bin vectors have length `n_bins + 1` with index 0 permanently zero, so bin
numbers index the arrays directly (bins are 1-based).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ParseError
from .numerics import round_half_up

logger = logging.getLogger(__name__)

PROTON_MASS = 1.00728

DEFAULT_N_BINS = 2000
DEFAULT_LAMBDA = 0.5

SUPPORTED_CHARGE_SETS = ({1}, {2}, {3}, {2, 3})


@dataclass
class RawSpectrum:
    """One fragmentation spectrum as read from an input file.

    `neutral_masses` maps each candidate precursor charge to the neutral
    (uncharged) precursor mass implied by the file's precursor line under
    that charge.
    """

    spectrum_id: str
    mz: np.ndarray
    intensity: np.ndarray
    charge_set: frozenset[int]
    neutral_masses: dict[int, float]

    def __post_init__(self):
        self.mz = np.asarray(self.mz, dtype=np.float64)
        self.intensity = np.asarray(self.intensity, dtype=np.float64)
        if self.mz.shape != self.intensity.shape:
            raise InvalidInputError(
                f"spectrum {self.spectrum_id}: {self.mz.size} m/z values but "
                f"{self.intensity.size} intensities")
        cs = set(self.charge_set)
        if cs not in [set(s) for s in SUPPORTED_CHARGE_SETS]:
            raise InvalidInputError(
                f"spectrum {self.spectrum_id}: unsupported charge set {sorted(cs)}")
        self.charge_set = frozenset(cs)
        missing = cs - set(self.neutral_masses)
        if missing:
            raise InvalidInputError(
                f"spectrum {self.spectrum_id}: no neutral mass for charge(s) "
                f"{sorted(missing)}")

    @property
    def n_peaks(self) -> int:
        return int(self.mz.size)


def _parse_charge_token(token: str) -> int:
    token = token.strip().rstrip("+")
    if token.startswith("-") or not token.isdigit():
        raise ValueError(f"bad charge token {token!r}")
    return int(token)


def parse_mgf(path) -> list[RawSpectrum]:
    """Parse a Mascot generic format file.

    Recognized in-block keys: TITLE, PEPMASS (first token is the precursor
    m/z), CHARGE (forms like ``2+`` or ``2+ and 3+``). The neutral mass for
    charge z is ``z * pepmass - z * PROTON_MASS``.
    """
    spectra = []
    in_block = False
    title = None
    pepmass = None
    charges: list[int] = []
    mzs: list[float] = []
    ints: list[float] = []
    count = 0

    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line == "BEGIN IONS":
                if in_block:
                    raise ParseError("nested BEGIN IONS", path=path, line=line_no)
                in_block = True
                title, pepmass, charges, mzs, ints = None, None, [], [], []
                continue
            if line == "END IONS":
                if not in_block:
                    raise ParseError("END IONS without BEGIN IONS",
                                     path=path, line=line_no)
                if pepmass is None:
                    raise ParseError("spectrum block missing PEPMASS",
                                     path=path, line=line_no, scan=title)
                if not charges:
                    raise ParseError("spectrum block missing CHARGE",
                                     path=path, line=line_no, scan=title)
                count += 1
                sid = title if title is not None else f"index={count}"
                neutral = {z: z * pepmass - z * PROTON_MASS for z in charges}
                spectra.append(RawSpectrum(
                    spectrum_id=sid,
                    mz=np.array(mzs, dtype=np.float64),
                    intensity=np.array(ints, dtype=np.float64),
                    charge_set=frozenset(charges),
                    neutral_masses=neutral,
                ))
                in_block = False
                continue
            if not in_block:
                raise ParseError(f"unexpected content outside spectrum block: {line!r}",
                                 path=path, line=line_no)
            if "=" in line and not line[0].isdigit():
                key, _, value = line.partition("=")
                key = key.strip().upper()
                value = value.strip()
                if key == "TITLE":
                    title = value
                elif key == "PEPMASS":
                    try:
                        pepmass = float(value.split()[0])
                    except (ValueError, IndexError):
                        raise ParseError(f"bad PEPMASS value {value!r}",
                                         path=path, line=line_no, scan=title) from None
                elif key == "CHARGE":
                    try:
                        charges = [_parse_charge_token(t)
                                   for t in value.replace(",", " ").split()
                                   if t.lower() != "and"]
                    except ValueError:
                        raise ParseError(f"bad CHARGE value {value!r}",
                                         path=path, line=line_no, scan=title) from None
                # other keys (RTINSECONDS etc) are ignored
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ParseError(f"bad peak line {line!r}",
                                 path=path, line=line_no, scan=title)
            try:
                mzs.append(float(parts[0]))
                ints.append(float(parts[1]))
            except ValueError:
                raise ParseError(f"bad peak line {line!r}",
                                 path=path, line=line_no, scan=title) from None

    if in_block:
        raise ParseError("file ended inside a spectrum block", path=path)
    return spectra


def parse_ms2(path) -> list[RawSpectrum]:
    """Parse an MS2 file.

    ``S`` lines start a spectrum (fields: first scan, last scan, precursor
    m/z); each ``Z`` line gives a charge and the singly protonated mass
    ``M+H``, so the neutral mass is ``M+H - PROTON_MASS``. ``H``, ``I`` and
    ``D`` lines are ignored.
    """
    spectra = []
    scan = None
    neutral: dict[int, float] = {}
    mzs: list[float] = []
    ints: list[float] = []

    def flush(line_no):
        if scan is None:
            return
        if not neutral:
            raise ParseError("spectrum has no Z line", path=path,
                             line=line_no, scan=scan)
        spectra.append(RawSpectrum(
            spectrum_id=scan,
            mz=np.array(mzs, dtype=np.float64),
            intensity=np.array(ints, dtype=np.float64),
            charge_set=frozenset(neutral),
            neutral_masses=dict(neutral),
        ))

    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "HID":
                continue
            parts = line.split()
            if parts[0] == "S":
                if len(parts) < 4:
                    raise ParseError(f"bad S line {line!r}", path=path, line=line_no)
                flush(line_no)
                scan = parts[1]
                neutral, mzs, ints = {}, [], []
            elif parts[0] == "Z":
                if scan is None:
                    raise ParseError("Z line before any S line",
                                     path=path, line=line_no)
                try:
                    z = int(parts[1])
                    mh = float(parts[2])
                except (ValueError, IndexError):
                    raise ParseError(f"bad Z line {line!r}", path=path,
                                     line=line_no, scan=scan) from None
                neutral[z] = mh - PROTON_MASS
            else:
                if scan is None:
                    raise ParseError(f"peak line before any S line: {line!r}",
                                     path=path, line=line_no)
                try:
                    mzs.append(float(parts[0]))
                    ints.append(float(parts[1]))
                except (ValueError, IndexError):
                    raise ParseError(f"bad peak line {line!r}", path=path,
                                     line=line_no, scan=scan) from None
        flush(None)
    return spectra


def parse_spectra(path) -> list[RawSpectrum]:
    """Dispatch to the right parser by file extension (.mgf or .ms2)."""
    name = str(path).lower()
    if name.endswith(".mgf"):
        return parse_mgf(path)
    if name.endswith(".ms2"):
        return parse_ms2(path)
    raise ParseError(f"unrecognized spectrum file extension: {path}", path=path)


def write_mgf(spectra, path, config: dict | None = None):
    """Write RawSpectrum records as an MGF file.

    The PEPMASS line is reconstructed from the lowest charge state's
    neutral mass; parse_mgf(write_mgf(x)) reproduces every neutral mass
    because all of them are derived from the same precursor m/z. An
    optional config dict is embedded as a leading comment line.
    """
    with open(path, "w", encoding="utf-8") as fh:
        if config is not None:
            fh.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
        for s in spectra:
            z0 = min(s.charge_set)
            pepmass = s.neutral_masses[z0] / z0 + PROTON_MASS
            charge_str = " and ".join(f"{z}+" for z in sorted(s.charge_set))
            fh.write("BEGIN IONS\n")
            fh.write(f"TITLE={s.spectrum_id}\n")
            fh.write(f"PEPMASS={pepmass:.6f}\n")
            fh.write(f"CHARGE={charge_str}\n")
            for mz, it in zip(s.mz, s.intensity):
                fh.write(f"{mz:.4f} {it:.4f}\n")
            fh.write("END IONS\n")


def rank_normalize(intensity: np.ndarray, mz: np.ndarray) -> np.ndarray:
    """Replace intensities by normalized ranks in (0, 1].

    Peaks are ordered by (intensity, m/z) ascending and the k-th peak of n
    receives rank k/n, so the largest intensity always maps to exactly 1.
    The m/z tie-break makes the result well defined for duplicate
    intensities. Returns ranks aligned with the input order.
    """
    n = intensity.size
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    order = np.lexsort((mz, intensity))
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = np.arange(1, n + 1, dtype=np.float64) / n
    return ranks


def bin_spectrum(mz: np.ndarray, values: np.ndarray,
                 n_bins: int = DEFAULT_N_BINS) -> np.ndarray:
    """Quantize peaks onto integer m/z bins, keeping the max value per bin.

    Bin numbers are round-half-up of the m/z, clamped into [1, n_bins]. The
    returned vector has length n_bins + 1 with index 0 unused (always 0).
    """
    out = np.zeros(n_bins + 1, dtype=np.float64)
    if mz.size == 0:
        return out
    bins = np.clip(round_half_up(mz), 1, n_bins)
    np.maximum.at(out, bins, values)
    return out


def f_lambda(s, lam: float = DEFAULT_LAMBDA):
    """Convex intensity reweighting applied to normalized intensities.

    f(S) = 1 - lam*exp(-lam) + lam*exp(-lam*(1 - S)), written so that
    f(0) == 1 holds exactly in floating point. Monotone increasing on
    [0, 1], hence >= 1 everywhere on the domain.
    """
    s = np.asarray(s, dtype=np.float64)
    result = 1.0 + lam * (np.exp(-lam * (1.0 - s)) - np.exp(-lam))
    return float(result) if result.ndim == 0 else result


@dataclass
class ProcessedSpectrum:
    """A spectrum in scoring form.

    `binned` holds the rank-normalized intensities on the bin grid (used by
    the cross-correlation scorer); `weights` holds f_lambda of the same
    vector and `log_weights` its natural log (used by the probabilistic
    scorer). All three have length n_bins + 1 with index 0 zero (weights[0]
    is 1, its log 0).
    """

    spectrum_id: str
    charge_set: frozenset[int]
    neutral_masses: dict[int, float]
    binned: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray
    n_bins: int
    lam: float

    @property
    def n_peaks_binned(self) -> int:
        return int(np.count_nonzero(self.binned))


def preprocess(spectrum: RawSpectrum, n_bins: int = DEFAULT_N_BINS,
               lam: float = DEFAULT_LAMBDA) -> ProcessedSpectrum:
    """Rank-normalize, bin, and weight one spectrum for scoring.

    A spectrum with no peaks yields an all-zero binned vector; its weights
    are then f(0) = 1 everywhere, so the log-weight vector is identically
    zero and every peptide scores as under a flat spectrum.
    """
    ranks = rank_normalize(spectrum.intensity, spectrum.mz)
    binned = bin_spectrum(spectrum.mz, ranks, n_bins)
    weights = f_lambda(binned, lam)
    return ProcessedSpectrum(
        spectrum_id=spectrum.spectrum_id,
        charge_set=spectrum.charge_set,
        neutral_masses=dict(spectrum.neutral_masses),
        binned=binned,
        weights=weights,
        log_weights=np.log(weights),
        n_bins=n_bins,
        lam=lam,
    )
