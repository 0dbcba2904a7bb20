"""Amino-acid mass chemistry, peptides, digestion, and peptide databases.

All residue masses are monoisotopic values rounded to the nearest whole
Dalton, so every peptide and fragment mass in the engine is an integer.
"""

from __future__ import annotations

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, ParseError

logger = logging.getLogger(__name__)

AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"

# Monoisotopic neutral residue masses (Da), standard reference values.
MONOISOTOPIC_RESIDUE_MASS = {
    "G": 57.02146, "A": 71.03711, "S": 87.03203, "P": 97.05276,
    "V": 99.06841, "T": 101.04768, "C": 103.00919, "L": 113.08406,
    "I": 113.08406, "N": 114.04293, "D": 115.02694, "Q": 128.05858,
    "K": 128.09496, "E": 129.04259, "M": 131.04049, "H": 137.05891,
    "F": 147.06841, "R": 156.10111, "Y": 163.06333, "W": 186.07931,
}

WATER_MASS_DA = 18          # integer water, added to the residue sum for a neutral peptide
MAX_PEPTIDE_LENGTH = 50     # tryptic peptides are never longer in practice

# Carbamidomethylation of cysteine, rounded to a whole Dalton.
DEFAULT_STATIC_MODS = {"C": 57}


@dataclass(frozen=True)
class ResidueMassTable:
    """Integer residue masses plus static (fixed) modifications.

    `mass_of` holds the unmodified rounded masses; `static_mods` holds
    per-letter integer offsets that are always applied (default: C +57).
    """

    mass_of: dict[str, int]
    static_mods: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_STATIC_MODS))

    @classmethod
    def default(cls, static_mods: dict[str, int] | None = None) -> "ResidueMassTable":
        masses = {aa: int(round(m)) for aa, m in MONOISOTOPIC_RESIDUE_MASS.items()}
        if static_mods is None:
            static_mods = dict(DEFAULT_STATIC_MODS)
        return cls(mass_of=masses, static_mods=dict(static_mods))

    def residue_mass(self, letter: str) -> int:
        """Neutral residue mass in Da including any static modification."""
        try:
            base = self.mass_of[letter]
        except KeyError:
            raise InvalidInputError(f"unknown amino acid letter {letter!r}") from None
        return base + self.static_mods.get(letter, 0)


def residue_mass(letter: str, table: ResidueMassTable) -> int:
    return table.residue_mass(letter)


@dataclass(frozen=True)
class Peptide:
    """A peptide with its prefix/suffix fragment mass ladders.

    prefix_masses[t] is the neutral mass of residues 1..t (prefix_masses[0] = 0);
    suffix_masses[t] is the neutral mass of residues t+1..n (suffix_masses[n] = 0).
    For every cleavage position t, prefix_masses[t] + suffix_masses[t] equals
    the total residue mass.
    """

    sequence: str
    prefix_masses: np.ndarray
    suffix_masses: np.ndarray

    @property
    def n(self) -> int:
        return len(self.sequence)

    @property
    def residue_mass_total(self) -> int:
        return int(self.prefix_masses[-1])

    @property
    def neutral_mass(self) -> int:
        """Neutral peptide mass: residue sum plus water."""
        return self.residue_mass_total + WATER_MASS_DA

    def __repr__(self):
        return f"Peptide({self.sequence!r}, mass={self.neutral_mass})"


def build_ladders(sequence: str, table: ResidueMassTable) -> Peptide:
    """Construct a Peptide with both fragment-mass ladders.

    Rejects empty sequences, sequences over the length cap, and unknown
    letters.
    """
    n = len(sequence)
    if n == 0:
        raise InvalidInputError("empty peptide sequence")
    if n > MAX_PEPTIDE_LENGTH:
        raise InvalidInputError(
            f"peptide length {n} exceeds the maximum of {MAX_PEPTIDE_LENGTH}")
    masses = np.array([table.residue_mass(a) for a in sequence], dtype=np.int64)
    prefix = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(masses, out=prefix[1:])
    suffix = prefix[-1] - prefix
    return Peptide(sequence=sequence, prefix_masses=prefix, suffix_masses=suffix)


def neutral_peptide_mass(p: Peptide) -> int:
    if p.n == 0:
        raise InvalidInputError("empty peptide")
    return p.neutral_mass


@dataclass(frozen=True)
class DigestionRules:
    """Tryptic digestion configuration.

    Cleaves C-terminal to K or R except when the next residue is P.
    `max_length=None` disables the upper length bound.
    """

    missed_cleavages: int = 0
    min_length: int = 1
    max_length: int | None = MAX_PEPTIDE_LENGTH

    def __post_init__(self):
        if self.missed_cleavages < 0:
            raise InvalidInputError("missed_cleavages must be >= 0")
        if self.min_length < 1:
            raise InvalidInputError("min_length must be >= 1")
        if self.max_length is not None and self.max_length < self.min_length:
            raise InvalidInputError("max_length must be >= min_length")


def digest(protein_sequence: str, rules: DigestionRules = DigestionRules()) -> list[str]:
    """Fully-tryptic in-silico digest of one protein sequence.

    Returns fragments in order of start position (then increasing span when
    missed cleavages are allowed). With zero missed cleavages and no length
    filter the fragments concatenate back to the input.
    """
    if not protein_sequence:
        return []
    cuts = [0]
    for i, aa in enumerate(protein_sequence[:-1]):
        if aa in "KR" and protein_sequence[i + 1] != "P":
            cuts.append(i + 1)
    cuts.append(len(protein_sequence))

    base = [protein_sequence[cuts[i]:cuts[i + 1]] for i in range(len(cuts) - 1)]
    out = []
    for i in range(len(base)):
        for k in range(rules.missed_cleavages + 1):
            if i + k >= len(base):
                break
            frag = "".join(base[i:i + k + 1])
            if len(frag) < rules.min_length:
                continue
            if rules.max_length is not None and len(frag) > rules.max_length:
                continue
            out.append(frag)
    return out


def parse_fasta(path) -> list[tuple[str, str]]:
    """Read a FASTA file into (header, uppercased sequence) pairs.

    Whitespace inside sequences is tolerated. Proteins containing `*` or
    letters outside the 20-letter alphabet are skipped with a warning.
    Sequence data before the first header is a parse error.
    """
    records = []
    header = None
    chunks: list[str] = []
    valid = set(AMINO_ACIDS)

    def flush(line_no):
        if header is None:
            return
        seq = "".join(chunks)
        bad = set(seq) - valid
        if bad:
            logger.warning("skipping protein %r: invalid letters %s",
                           header, "".join(sorted(bad)))
        else:
            records.append((header, seq))

    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith(">"):
                flush(line_no)
                header = line[1:].strip()
                chunks = []
            else:
                if header is None:
                    raise ParseError("sequence data before any FASTA header",
                                     path=path, line=line_no)
                chunks.append("".join(line.split()).upper())
        flush(None)
    return records


def write_fasta(records, path):
    """Write (header, sequence) pairs as a FASTA file, 60 columns per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for header, seq in records:
            fh.write(f">{header}\n")
            for i in range(0, len(seq), 60):
                fh.write(seq[i:i + 60] + "\n")


class PeptideDatabase:
    """Deduplicated peptide set with a neutral-mass index.

    Peptides are held sorted by (neutral mass, sequence) so mass-window
    queries are two bisects. Immutable after construction and safe to share
    across threads.
    """

    def __init__(self, peptides, provenance: str = "target"):
        unique = {}
        for p in peptides:
            unique.setdefault(p.sequence, p)
        ordered = sorted(unique.values(), key=lambda p: (p.neutral_mass, p.sequence))
        self.peptides: list[Peptide] = ordered
        self._masses = [p.neutral_mass for p in ordered]
        self.provenance = provenance

    def __len__(self):
        return len(self.peptides)

    def __contains__(self, sequence: str):
        return sequence in self.sequences()

    def sequences(self) -> set[str]:
        if not hasattr(self, "_seqset"):
            self._seqset = {p.sequence for p in self.peptides}
        return self._seqset

    def peptides_in_mass_window(self, lo: float, hi: float) -> list[Peptide]:
        """All peptides with neutral mass in the closed interval [lo, hi]."""
        i = bisect_left(self._masses, lo)
        j = bisect_right(self._masses, hi)
        return self.peptides[i:j]


def build_database(fasta_path, table: ResidueMassTable,
                   rules: DigestionRules = DigestionRules()) -> PeptideDatabase:
    """Digest every protein in a FASTA file into a target database."""
    sequences = set()
    for _, protein in parse_fasta(fasta_path):
        sequences.update(digest(protein, rules))
    peptides = [build_ladders(s, table) for s in sorted(sequences)]
    return PeptideDatabase(peptides, provenance="target")


def generate_decoys(fasta_path, seed: int, table: ResidueMassTable,
                    rules: DigestionRules = DigestionRules(),
                    target_db: PeptideDatabase | None = None) -> PeptideDatabase:
    """Build a decoy database by per-protein shuffling of the proteome.

    Each protein's residues are permuted with a generator seeded once from
    `seed` (proteins processed in file order, so the result is a pure
    function of the file bytes, the seed, and the rules). Decoy sequences
    already present in the target database are dropped.
    """
    if target_db is None:
        target_db = build_database(fasta_path, table, rules)
    rng = np.random.Generator(np.random.PCG64(seed))
    sequences = set()
    for _, protein in parse_fasta(fasta_path):
        letters = np.array(list(protein))
        shuffled = "".join(rng.permutation(letters)) if len(letters) else ""
        sequences.update(digest(shuffled, rules))
    sequences -= target_db.sequences()
    peptides = [build_ladders(s, table) for s in sorted(sequences)]
    return PeptideDatabase(peptides, provenance=f"decoy(seed={seed})")
