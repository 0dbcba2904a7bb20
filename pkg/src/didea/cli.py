"""Command-line interface.

Subcommands: digest, search, evaluate, synth, score. Flag values override
config-file values, which override defaults. Exit codes: 0 success, 2 usage
error (argparse), 3 input/parse error, 4 configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

from .chem import (
    DigestionRules,
    ResidueMassTable,
    build_database,
    build_ladders,
    generate_decoys,
)
from .config import CHARGE_MODES, SCORERS, Y_CHARGE_RULES, RunConfig
from .errors import ConfigError, DideaError, InvalidInputError, ParseError
from .evaluate import make_eval_table, write_curve, write_eval_table
from .scoring import (
    brute_force_shift_posterior,
    charge_posterior,
    didea_diagnostics,
    xcorr_score,
)
from .search import read_psms, run_search, write_psms
from .spectra import parse_spectra, preprocess, write_mgf
from .synth import SynthParams, synthesize_corpus, write_key

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 3
EXIT_CONFIG = 4


def _add_config_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", metavar="JSON",
                   help="config file; flags given here still win")
    g.add_argument("--delta", type=float, default=argparse.SUPPRESS,
                   help="precursor mass window half-width in Da (default 3.0)")
    g.add_argument("--lambda", dest="lambda_", type=float,
                   default=argparse.SUPPRESS, metavar="LAMBDA",
                   help="intensity reweighting strength (default 0.5)")
    g.add_argument("--shift-max", type=int, default=argparse.SUPPRESS,
                   help="maximum absolute fragment shift in bins (default 37)")
    g.add_argument("--bins", type=int, default=argparse.SUPPRESS,
                   help="number of m/z bins (default 2000)")
    g.add_argument("--scorer", choices=SCORERS, default=argparse.SUPPRESS,
                   help="PSM scorer (default didea)")
    g.add_argument("--charge-mode", choices=CHARGE_MODES,
                   default=argparse.SUPPRESS,
                   help="how multi-charge spectra are scored (default mixture)")
    g.add_argument("--fixed-charge", type=int, default=argparse.SUPPRESS,
                   help="charge to assume when --charge-mode fixed")
    g.add_argument("--y-charge-rule", choices=Y_CHARGE_RULES,
                   default=argparse.SUPPRESS,
                   help="fragment-charge pairing for charge-3 precursors "
                        "(default conserve)")
    g.add_argument("--decoy-seed", type=int, default=argparse.SUPPRESS,
                   help="seed for decoy proteome shuffling (default 1)")
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="worker threads for search (default 1)")


def _add_digestion_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("digestion")
    g.add_argument("--missed-cleavages", type=int, default=0)
    g.add_argument("--min-length", type=int, default=1)
    g.add_argument("--max-length", type=int, default=50)


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        base = RunConfig.load(args.config).to_dict()
    overrides = {}
    for f in dataclasses.fields(RunConfig):
        if hasattr(args, f.name):
            overrides[f.name] = getattr(args, f.name)
    merged = dict(base)
    for name, value in overrides.items():
        merged["lambda" if name == "lambda_" else name] = value
    return RunConfig.from_dict(merged)


def _output_config(cfg: RunConfig) -> dict:
    # file headers record only keys that determine the output bytes;
    # thread count must not (outputs are independent of parallelism)
    d = cfg.to_dict()
    d.pop("threads")
    return d


def _digestion_rules(args) -> DigestionRules:
    return DigestionRules(missed_cleavages=args.missed_cleavages,
                          min_length=args.min_length,
                          max_length=args.max_length)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="didea",
        description="Tandem mass spectrum identification: probabilistic "
                    "shift-posterior scoring, cross-correlation baseline, "
                    "database search, and target-decoy evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("digest", help="digest a FASTA proteome into peptides")
    p.add_argument("fasta")
    p.add_argument("-o", "--out", required=True, help="output peptide TSV")
    _add_digestion_flags(p)
    _add_config_flags(p)

    p = sub.add_parser("search", help="search spectra against a proteome")
    p.add_argument("spectra", help="MGF or MS2 file")
    p.add_argument("fasta", help="target proteome FASTA")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--top-k", type=int, default=1,
                   help="PSMs to keep per spectrum (default 1)")
    _add_digestion_flags(p)
    _add_config_flags(p)

    p = sub.add_parser("evaluate", help="target-decoy statistics from PSM files")
    p.add_argument("target_psms")
    p.add_argument("decoy_psms")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--smoothed", action="store_true",
                   help="add-one smoothing for empirical p-values")
    _add_config_flags(p)

    p = sub.add_parser("synth", help="synthesize spectra from known peptides")
    p.add_argument("peptides", help="file with one peptide per line "
                                    "(or a digest TSV)")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--signal-peaks-fraction", type=float, default=1.0)
    p.add_argument("--noise-peak-count", type=int, default=0)
    p.add_argument("--mz-jitter-sd", type=float, default=0.0)
    p.add_argument("--intensity-model", choices=["uniform", "rank-biased"],
                   default="rank-biased")
    p.add_argument("--charge", type=int, choices=[1, 2, 3], default=2)
    _add_config_flags(p)

    p = sub.add_parser("score", help="score one peptide against one spectrum")
    p.add_argument("peptide")
    p.add_argument("spectrum_file")
    p.add_argument("--spectrum-id",
                   help="spectrum to pick from the file (default: first)")
    p.add_argument("--oracle", action="store_true",
                   help="also report the brute-force enumeration score")
    _add_config_flags(p)

    return parser


def cmd_digest(args) -> int:
    cfg = _resolve_config(args)
    table = ResidueMassTable.default()
    db = build_database(args.fasta, table, _digestion_rules(args))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"# config: {json.dumps(_output_config(cfg), sort_keys=True)}\n")
        fh.write("peptide\tneutral_mass\n")
        for p in db.peptides:
            fh.write(f"{p.sequence}\t{p.neutral_mass}\n")
    logger.info("digested %s into %d peptides", args.fasta, len(db))
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = _resolve_config(args)
    table = ResidueMassTable.default()
    rules = _digestion_rules(args)
    raw = parse_spectra(args.spectra)
    target_db = build_database(args.fasta, table, rules)
    decoy_db = generate_decoys(args.fasta, cfg.decoy_seed, table, rules,
                               target_db=target_db)
    processed = [preprocess(s, n_bins=cfg.bins, lam=cfg.lambda_) for s in raw]
    result = run_search(processed, target_db, decoy_db,
                        cfg.search_settings(top_k=args.top_k))
    conf = _output_config(cfg)
    write_psms(result.target_psms, f"{args.out_prefix}.target.psms.tsv", conf)
    write_psms(result.decoy_psms, f"{args.out_prefix}.decoy.psms.tsv", conf)
    print(json.dumps(cfg.to_dict(), sort_keys=True))
    logger.info("searched %d spectra: %d target PSMs, %d decoy PSMs, "
                "%d unmatched", len(processed), len(result.target_psms),
                len(result.decoy_psms), len(result.unmatched))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = _resolve_config(args)
    targets = read_psms(args.target_psms)
    decoys = read_psms(args.decoy_psms)
    table = make_eval_table(targets, decoys, smoothed=args.smoothed)
    conf = _output_config(cfg)
    write_eval_table(table, f"{args.out_prefix}.eval.tsv", conf)
    write_curve(table.curve, f"{args.out_prefix}.curve.csv", conf)
    logger.info("evaluated %d targets against %d decoys",
                len(targets), len(decoys))
    return EXIT_OK


def _read_peptide_list(path) -> list[str]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            first = line.split("\t")[0]
            if first == "peptide":
                continue
            out.append(first)
    if not out:
        raise InvalidInputError(f"no peptides found in {path}")
    return out


def cmd_synth(args) -> int:
    cfg = _resolve_config(args)
    table = ResidueMassTable.default()
    peptides = [build_ladders(seq, table)
                for seq in _read_peptide_list(args.peptides)]
    params = SynthParams(
        seed=args.seed,
        signal_peaks_fraction=args.signal_peaks_fraction,
        noise_peak_count=args.noise_peak_count,
        mz_jitter_sd=args.mz_jitter_sd,
        intensity_model=args.intensity_model,
        charge=args.charge,
        precursor_mass_window=cfg.delta,
    )
    spectra, key = synthesize_corpus(peptides, params)
    conf = _output_config(cfg)
    write_mgf(spectra, f"{args.out_prefix}.mgf", config=conf)
    write_key(key, f"{args.out_prefix}.key.tsv", config=conf)
    logger.info("synthesized %d spectra", len(spectra))
    return EXIT_OK


def cmd_score(args) -> int:
    cfg = _resolve_config(args)
    table = ResidueMassTable.default()
    peptide = build_ladders(args.peptide, table)
    spectra = parse_spectra(args.spectrum_file)
    if not spectra:
        raise InvalidInputError(f"no spectra in {args.spectrum_file}")
    if args.spectrum_id is not None:
        matches = [s for s in spectra if s.spectrum_id == args.spectrum_id]
        if not matches:
            raise InvalidInputError(
                f"spectrum {args.spectrum_id!r} not found in {args.spectrum_file}")
        raw = matches[0]
    else:
        raw = spectra[0]
    processed = preprocess(raw, n_bins=cfg.bins, lam=cfg.lambda_)
    scoring = cfg.scoring_config()

    print(f"peptide: {peptide.sequence}")
    print(f"spectrum: {processed.spectrum_id}")
    if cfg.scorer == "xcorr":
        fc = cfg.fixed_charge if cfg.charge_mode == "fixed" else None
        score = xcorr_score(processed, peptide, scoring, fixed_charge=fc)
        print("scorer: xcorr")
        print(f"score: {score:.6f}")
        return EXIT_OK

    mode = "max" if cfg.charge_mode == "max_over_charges" else cfg.charge_mode
    diag = didea_diagnostics(processed, peptide, scoring, charge_mode=mode,
                             fixed_charge=cfg.fixed_charge)
    print("scorer: didea")
    print(f"charge_model: {diag.model}")
    print(f"theta: {diag.score:.6f}")
    if processed.charge_set == frozenset({2, 3}):
        post = charge_posterior(processed, peptide, scoring)
        print(f"p_charge2: {post[2]:.6f}")
        print(f"p_charge3: {post[3]:.6f}")
    if args.oracle:
        oracle = brute_force_shift_posterior(processed, peptide, scoring,
                                             charge_mode=mode,
                                             fixed_charge=cfg.fixed_charge)
        print(f"theta_oracle: {oracle:.6f}")
        print(f"oracle_abs_diff: {abs(diag.score - oracle):.2e}")
    print("shift\tlog_likelihood")
    for shift, value in zip(diag.shifts, diag._scoring_profile):
        print(f"{shift}\t{value:.6f}")
    return EXIT_OK


_COMMANDS = {
    "digest": cmd_digest,
    "search": cmd_search,
    "evaluate": cmd_evaluate,
    "synth": cmd_synth,
    "score": cmd_score,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DideaError as exc:  # any other library failure is an input problem
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
