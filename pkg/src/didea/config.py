"""Run configuration: one flat record tying every knob together.

Serializes to plain JSON (the field `lambda_` travels under the key
"lambda" since the bare word is reserved in Python). The same dict that
round-trips through a config file is embedded as a comment header in every
output file, so results always carry the settings that produced them.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import ConfigError
from .scoring import ScoringConfig
from .search import SearchSettings

_KEY_OF_FIELD = {"lambda_": "lambda"}
_FIELD_OF_KEY = {"lambda": "lambda_"}

SCORERS = ("didea", "xcorr")
CHARGE_MODES = ("mixture", "fixed", "max_over_charges")
Y_CHARGE_RULES = ("conserve", "literal")


@dataclass(frozen=True)
class RunConfig:
    delta: float = 3.0
    lambda_: float = 0.5
    shift_max: int = 37
    bins: int = 2000
    scorer: str = "didea"
    charge_mode: str = "mixture"
    fixed_charge: int | None = None
    y_charge_rule: str = "conserve"
    decoy_seed: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        if self.lambda_ <= 0:
            raise ConfigError("lambda must be positive")
        if self.shift_max < 0:
            raise ConfigError("shift_max must be >= 0")
        if self.bins < 1:
            raise ConfigError("bins must be >= 1")
        if self.scorer not in SCORERS:
            raise ConfigError(f"scorer must be one of {SCORERS}")
        if self.charge_mode not in CHARGE_MODES:
            raise ConfigError(f"charge_mode must be one of {CHARGE_MODES}")
        if self.y_charge_rule not in Y_CHARGE_RULES:
            raise ConfigError(f"y_charge_rule must be one of {Y_CHARGE_RULES}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.charge_mode == "fixed":
            if self.fixed_charge not in (1, 2, 3):
                raise ConfigError(
                    "charge_mode 'fixed' requires fixed_charge of 1, 2, or 3")
        elif self.fixed_charge is not None:
            raise ConfigError(
                "fixed_charge only makes sense with charge_mode 'fixed'")

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            out[_KEY_OF_FIELD.get(f.name, f.name)] = getattr(self, f.name)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in d.items():
            field = _FIELD_OF_KEY.get(key, key)
            if field not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[field] = value
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return cls.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")

    def scoring_config(self) -> ScoringConfig:
        return ScoringConfig(n_bins=self.bins, shift_max=self.shift_max,
                             lam=self.lambda_, y_charge_rule=self.y_charge_rule)

    def search_settings(self, top_k: int = 1) -> SearchSettings:
        mode = "max" if self.charge_mode == "max_over_charges" else self.charge_mode
        return SearchSettings(scoring=self.scoring_config(), delta=self.delta,
                              scorer=self.scorer, charge_mode=mode,
                              fixed_charge=self.fixed_charge,
                              threads=self.threads, top_k=top_k)
