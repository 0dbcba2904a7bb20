"""Peptide-spectrum match scoring.

Two scorers share the binned-spectrum representation:

  * a probabilistic model that scores a peptide by how sharply the
    posterior over a global fragment m/z shift concentrates at zero
    (`didea_score`), and
  * a cross-correlation baseline that compares the unshifted correlation
    against the mean over shifted ones (`xcorr_score`).

A brute-force enumeration of the probabilistic model's joint latent space
(`brute_force_shift_posterior`) is kept alongside as an oracle for the
factorized fast path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .chem import Peptide, WATER_MASS_DA
from .errors import ConfigError, InvalidInputError
from .numerics import logsumexp, round_half_up
from .spectra import DEFAULT_LAMBDA, DEFAULT_N_BINS, ProcessedSpectrum

DEFAULT_SHIFT_MAX = 37
XCORR_SHIFT_RANGE = 75


@dataclass(frozen=True)
class ScoringConfig:
    """Knobs shared by both scorers.

    `y_charge_rule` picks how the two fragment charges pair up when a
    triply charged precursor splits: "conserve" pairs a singly charged
    prefix ion with a doubly charged suffix ion and vice versa (the third
    proton stays accounted for); "literal" gives both fragments the same
    charge.
    """

    n_bins: int = DEFAULT_N_BINS
    shift_max: int = DEFAULT_SHIFT_MAX
    lam: float = DEFAULT_LAMBDA
    y_charge_rule: str = "conserve"
    xcorr_shift_range: int = XCORR_SHIFT_RANGE

    def __post_init__(self):
        if self.n_bins < 1:
            raise ConfigError("n_bins must be positive")
        if self.shift_max < 0 or self.xcorr_shift_range < 1:
            raise ConfigError("shift ranges must be positive")
        if self.y_charge_rule not in ("conserve", "literal"):
            raise ConfigError(
                f"y_charge_rule must be 'conserve' or 'literal', "
                f"got {self.y_charge_rule!r}")

    @property
    def n_shifts(self) -> int:
        return 2 * self.shift_max + 1


def ion_bin(fragment_mass: float, charge: int, series: str,
            n_bins: int = DEFAULT_N_BINS) -> int:
    """Map a neutral fragment mass to its m/z bin at the given charge.

    Prefix (b-series) ions carry `charge` extra protons; suffix (y-series)
    ions additionally retain the water. Half-up rounding, clamped into
    [1, n_bins].
    """
    if series == "b":
        mz = (fragment_mass + charge) / charge
    elif series == "y":
        mz = (fragment_mass + WATER_MASS_DA + charge) / charge
    else:
        raise InvalidInputError(f"unknown ion series {series!r}")
    return min(max(round_half_up(mz), 1), n_bins)


def fragment_bins(peptide: Peptide, charge: int, series: str,
                  n_bins: int = DEFAULT_N_BINS) -> np.ndarray:
    """Bin numbers for all n-1 cleavage fragments of one series, in order."""
    if series == "b":
        masses = peptide.prefix_masses[1:-1] + charge
    else:
        masses = peptide.suffix_masses[1:-1] + WATER_MASS_DA + charge
    bins = round_half_up(masses / charge)
    return np.clip(bins, 1, n_bins).astype(np.int64)


def charge_profile(spectrum: ProcessedSpectrum, peptide: Peptide, z: int,
                   config: ScoringConfig = ScoringConfig()) -> np.ndarray:
    """Log-likelihood of the spectrum for every shift under one charge model.

    Returns a vector over shifts -shift_max..shift_max (zero shift at the
    center index). z selects the fragmentation model: 2 gives one proton to
    each fragment, 3 splits three protons across the pair (an even mixture
    over the two splits), 1 lets only one fragment of the pair hold the
    proton (an even mixture over the two series).
    """
    nb = config.n_bins
    if z == 2:
        return kernels.shift_profile_sum_log(
            fragment_bins(peptide, 1, "b", nb), fragment_bins(peptide, 1, "y", nb),
            spectrum.log_weights, config.shift_max)
    if z == 3:
        b1 = fragment_bins(peptide, 1, "b", nb)
        b2 = fragment_bins(peptide, 2, "b", nb)
        y1 = fragment_bins(peptide, 1, "y", nb)
        y2 = fragment_bins(peptide, 2, "y", nb)
        if config.y_charge_rule == "conserve":
            pairs = (b1, y2, b2, y1)
        else:
            pairs = (b1, y1, b2, y2)
        return kernels.shift_profile_split_charge(
            *pairs, spectrum.weights, config.shift_max)
    if z == 1:
        return kernels.shift_profile_single_proton(
            fragment_bins(peptide, 1, "b", nb), fragment_bins(peptide, 1, "y", nb),
            spectrum.weights, config.shift_max)
    raise InvalidInputError(f"no charge model for precursor charge {z}")


def score_from_profile(log_profile: np.ndarray) -> float:
    """Log posterior probability of the zero shift under a flat shift prior."""
    center = (log_profile.size - 1) // 2
    return float(log_profile[center]) - logsumexp(log_profile)


def resolve_charge_model(charge_set, charge_mode: str = "mixture",
                         fixed_charge: int | None = None):
    """Reduce a requested charge mode to what the spectrum supports.

    Returns ("fixed", z) or ("mixture"|"max", (2, 3)). A single-charge
    spectrum degrades mixture/max to the one available model; a fixed
    request for a charge the spectrum does not list is a configuration
    error.
    """
    cs = set(charge_set)
    if charge_mode == "fixed":
        if fixed_charge is None:
            raise ConfigError("charge_mode 'fixed' requires fixed_charge")
        if fixed_charge not in cs:
            raise ConfigError(
                f"fixed charge {fixed_charge} not in the spectrum's "
                f"charge set {sorted(cs)}")
        return ("fixed", fixed_charge)
    if charge_mode not in ("mixture", "max"):
        raise ConfigError(f"unknown charge_mode {charge_mode!r}")
    if len(cs) == 1:
        return ("fixed", next(iter(cs)))
    return (charge_mode, (2, 3))


def model_label(resolved) -> str:
    kind, arg = resolved
    return str(arg) if kind == "fixed" else kind


def didea_score(spectrum: ProcessedSpectrum, peptide: Peptide,
                config: ScoringConfig = ScoringConfig(),
                charge_mode: str = "mixture",
                fixed_charge: int | None = None) -> float:
    """Shift-posterior score of one peptide against one spectrum.

    The score is the log posterior probability that the observed fragments
    line up with the theoretical ones at zero shift, relative to every
    other shift in the window. Always <= 0; a flat (uninformative) spectrum
    scores exactly -log(n_shifts).
    """
    kind, arg = resolve_charge_model(spectrum.charge_set, charge_mode, fixed_charge)
    if kind == "fixed":
        return score_from_profile(charge_profile(spectrum, peptide, arg, config))
    profiles = [charge_profile(spectrum, peptide, z, config) for z in arg]
    if kind == "max":
        return max(score_from_profile(a) for a in profiles)
    return score_from_profile(np.logaddexp(profiles[0], profiles[1]))


def charge_posterior(spectrum: ProcessedSpectrum, peptide: Peptide,
                     config: ScoringConfig = ScoringConfig()) -> dict[int, float]:
    """Posterior over precursor charge 2 vs 3 under the equal-prior mixture."""
    if spectrum.charge_set != frozenset({2, 3}):
        raise InvalidInputError(
            "charge posterior is only defined for spectra with charge set {2, 3}")
    a2 = charge_profile(spectrum, peptide, 2, config)
    a3 = charge_profile(spectrum, peptide, 3, config)
    total = logsumexp(np.concatenate([a2, a3]))
    p2 = math.exp(logsumexp(a2) - total)
    return {2: p2, 3: 1.0 - p2}


@dataclass
class ShiftDiagnostics:
    """Everything `didea_score` computes, kept for inspection output."""

    shifts: np.ndarray
    per_charge_log_profiles: dict[int, np.ndarray]
    per_charge_scores: dict[int, float]
    model: str
    score: float

    @property
    def log_shift_posterior(self) -> np.ndarray:
        """Normalized log posterior over shifts for the scoring profile."""
        a = self._scoring_profile
        return a - logsumexp(a)

    @property
    def _scoring_profile(self) -> np.ndarray:
        profiles = list(self.per_charge_log_profiles.values())
        if self.model == "mixture":
            return np.logaddexp(profiles[0], profiles[1])
        if self.model == "max":
            best = max(self.per_charge_scores, key=self.per_charge_scores.get)
            return self.per_charge_log_profiles[best]
        return profiles[0]


def didea_diagnostics(spectrum: ProcessedSpectrum, peptide: Peptide,
                      config: ScoringConfig = ScoringConfig(),
                      charge_mode: str = "mixture",
                      fixed_charge: int | None = None) -> ShiftDiagnostics:
    kind, arg = resolve_charge_model(spectrum.charge_set, charge_mode, fixed_charge)
    charges = [arg] if kind == "fixed" else list(arg)
    profiles = {z: charge_profile(spectrum, peptide, z, config) for z in charges}
    scores = {z: score_from_profile(a) for z, a in profiles.items()}
    if kind == "fixed":
        score = scores[arg]
    elif kind == "max":
        score = max(scores.values())
    else:
        score = score_from_profile(
            np.logaddexp(profiles[2], profiles[3]))
    return ShiftDiagnostics(
        shifts=np.arange(-config.shift_max, config.shift_max + 1),
        per_charge_log_profiles=profiles,
        per_charge_scores=scores,
        model=model_label((kind, arg)),
        score=score,
    )


def theoretical_spectrum(peptide: Peptide, z: int,
                         n_bins: int = DEFAULT_N_BINS) -> np.ndarray:
    """Indicator bin set for the cross-correlation scorer.

    Precursor charges 1 and 2 predict singly charged fragments; charge 3
    adds the doubly charged ones. Returns sorted unique bins.
    """
    frag_charges = (1,) if z in (1, 2) else (1, 2)
    parts = []
    for xi in frag_charges:
        parts.append(fragment_bins(peptide, xi, "b", n_bins))
        parts.append(fragment_bins(peptide, xi, "y", n_bins))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(parts))


def xcorr_score(spectrum: ProcessedSpectrum, peptide: Peptide,
                config: ScoringConfig = ScoringConfig(),
                fixed_charge: int | None = None) -> float:
    """Cross-correlation score: unshifted minus the mean shifted correlation.

    Computed as the mean of the individual differences so a spectrum that
    correlates identically at every shift scores exactly 0. Spectra with
    both charges listed take the better of the two charge interpretations.
    """
    if fixed_charge is not None:
        if fixed_charge not in spectrum.charge_set:
            raise ConfigError(
                f"fixed charge {fixed_charge} not in the spectrum's "
                f"charge set {sorted(spectrum.charge_set)}")
        charges = [fixed_charge]
    else:
        charges = sorted(spectrum.charge_set)
    r = config.xcorr_shift_range
    best = -math.inf
    for z in charges:
        phi = theoretical_spectrum(peptide, z, config.n_bins)
        c = kernels.shifted_theoretical_correlations(phi, spectrum.binned, r)
        diffs = c[r] - c
        best = max(best, float(diffs.sum()) / (2 * r))
    return best


MAX_ORACLE_LENGTH = 10


def _enumerated_shift_masses(spectrum: ProcessedSpectrum, peptide: Peptide,
                             config: ScoringConfig, z: int) -> list[float]:
    """Linear-space probability mass per shift under one charge model.

    Enumerates every joint assignment of the per-frame latent variable via
    itertools.product and multiplies plain Python floats, deliberately
    avoiding the factorized per-frame summation of the fast path.
    Exponential in peptide length and therefore capped.
    """
    if peptide.n > MAX_ORACLE_LENGTH:
        raise InvalidInputError(
            f"oracle limited to peptides of length <= {MAX_ORACLE_LENGTH}")
    w = spectrum.weights
    nb = config.n_bins
    n_frames = peptide.n - 1

    # Each frame's options: (per-option prior, bins whose weights multiply).
    if z == 2:
        bb = fragment_bins(peptide, 1, "b", nb)
        by = fragment_bins(peptide, 1, "y", nb)
        frame_options = [[(1.0, (bb[t], by[t]))] for t in range(n_frames)]
    elif z == 3:
        b1 = fragment_bins(peptide, 1, "b", nb)
        b2 = fragment_bins(peptide, 2, "b", nb)
        y1 = fragment_bins(peptide, 1, "y", nb)
        y2 = fragment_bins(peptide, 2, "y", nb)
        if config.y_charge_rule == "conserve":
            frame_options = [[(0.5, (b1[t], y2[t])), (0.5, (b2[t], y1[t]))]
                             for t in range(n_frames)]
        else:
            frame_options = [[(0.5, (b1[t], y1[t])), (0.5, (b2[t], y2[t]))]
                             for t in range(n_frames)]
    elif z == 1:
        bb = fragment_bins(peptide, 1, "b", nb)
        by = fragment_bins(peptide, 1, "y", nb)
        frame_options = [[(0.5, (bb[t],)), (0.5, (by[t],))]
                         for t in range(n_frames)]
    else:
        raise InvalidInputError(f"no charge model for precursor charge {z}")

    masses = []
    for tau in range(-config.shift_max, config.shift_max + 1):
        mass = 0.0
        for assignment in itertools.product(*frame_options):
            product = 1.0
            for prior, bins in assignment:
                product *= prior
                for bin_no in bins:
                    product *= w[min(max(bin_no + tau, 1), nb)]
            mass += product
        masses.append(mass)
    return masses


def brute_force_shift_posterior(spectrum: ProcessedSpectrum, peptide: Peptide,
                                config: ScoringConfig = ScoringConfig(),
                                charge_mode: str = "mixture",
                                fixed_charge: int | None = None) -> float:
    """Log posterior of the zero shift computed by exhaustive enumeration.

    Cross-checks `didea_score` on short peptides; see
    `_enumerated_shift_masses` for the mechanics.
    """
    kind, arg = resolve_charge_model(spectrum.charge_set, charge_mode, fixed_charge)
    if kind == "max":
        raise InvalidInputError("the max mode is not a posterior; no oracle for it")
    charges = [arg] if kind == "fixed" else list(arg)
    mass_at_zero = 0.0
    mass_total = 0.0
    for z in charges:
        masses = _enumerated_shift_masses(spectrum, peptide, config, z)
        prior = 1.0 / len(charges)
        mass_at_zero += prior * masses[config.shift_max]
        mass_total += prior * sum(masses)
    return math.log(mass_at_zero / mass_total)


def brute_force_charge_posterior(spectrum: ProcessedSpectrum, peptide: Peptide,
                                 config: ScoringConfig = ScoringConfig()
                                 ) -> dict[int, float]:
    """Charge posterior computed by exhaustive enumeration."""
    m2 = sum(_enumerated_shift_masses(spectrum, peptide, config, 2))
    m3 = sum(_enumerated_shift_masses(spectrum, peptide, config, 3))
    p2 = m2 / (m2 + m3)
    return {2: p2, 3: 1.0 - p2}
