"""Tandem mass spectrum identification engine.

Scores peptide-spectrum matches with a shift-posterior dynamic Bayesian
network model alongside a classic cross-correlation baseline, searches
in-silico tryptic digests, and evaluates identifications with target-decoy
false discovery rate estimates.
"""

__version__ = "0.1.0"
