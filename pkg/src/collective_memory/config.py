"""Weighting parameters and engine configuration.

`WeightParams` holds the numeric knobs of the memory model. The three mixing
coefficients default to alpha=0.3, beta=0.5, gamma=0.2 and the forgetting
threshold to 0.1 with a 7-day archive window. The log in the frequency term
is the natural log; the softmax over emotions is computed per theme cluster
with temperature 1; the decay half-life and synthesis threshold are artifact
defaults (1 cycle, 0.5) and are expected to be tuned per deployment.

`EngineConfig` is the service/harness-level configuration: embedder seed and
dimension, context size, gazetteer and lexicon paths, dialogue client
selection ("stub" or an external URL), the HTTP port, and the event log path.
It loads from a JSON file; the path can also come from the
COLLECTIVE_MEMORY_CONFIG environment variable.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

CONFIG_ENV_VAR = "COLLECTIVE_MEMORY_CONFIG"

DEFAULT_PLACE_INTENT_KEYWORDS = ("place", "where", "city", "location", "street")


@dataclass(frozen=True)
class WeightParams:
    alpha: float = 0.3
    beta: float = 0.5
    gamma: float = 0.2
    w_forget: float = 0.1
    w_synth: float = 0.5
    merge_threshold: float = 0.9
    theme_threshold: float = 0.6
    decay_half_life_cycles: float = 1.0
    archive_after_days: int = 7

    def __post_init__(self) -> None:
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("mixing coefficients must be non-negative")
        if not self.w_forget < self.w_synth:
            raise ValueError("w_forget must be below w_synth")
        if not 0 < self.merge_threshold <= 1:
            raise ValueError("merge_threshold must be in (0, 1]")
        if not 0 <= self.theme_threshold <= 1:
            raise ValueError("theme_threshold must be in [0, 1]")
        if self.decay_half_life_cycles <= 0:
            raise ValueError("decay_half_life_cycles must be positive")
        if self.archive_after_days < 1:
            raise ValueError("archive_after_days must be at least 1")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "WeightParams":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class EngineConfig:
    params: WeightParams = field(default_factory=WeightParams)
    embedder_dim: int = 256
    embedder_seed: int = 7
    context_k: int = 5
    place_intent_keywords: tuple[str, ...] = DEFAULT_PLACE_INTENT_KEYWORDS
    gazetteer_path: str | None = None
    lexicon_path: str | None = None
    dialogue_client: str = "stub"
    dialogue_timeout: float = 10.0
    event_log_path: str | None = None
    auto_register_sessions: bool = True
    avatar_weight_reference: float = 1.0
    avatar_conflict_reference: int = 5
    port: int = 8760

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["params"] = self.params.to_dict()
        data["place_intent_keywords"] = list(self.place_intent_keywords)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EngineConfig":
        data = dict(data)
        params = data.pop("params", None)
        keywords = data.pop("place_intent_keywords", None)
        known = {f for f in cls.__dataclass_fields__ if f != "params"}
        cfg = cls(
            params=WeightParams.from_dict(params) if params else WeightParams(),
            **{k: v for k, v in data.items() if k in known},
        )
        if keywords is not None:
            cfg.place_intent_keywords = tuple(keywords)
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def from_env(cls, path: str | Path | None = None) -> "EngineConfig":
        """Load from an explicit path, else the env var, else defaults."""
        candidate = path or os.environ.get(CONFIG_ENV_VAR)
        if candidate:
            return cls.from_file(candidate)
        return cls()
