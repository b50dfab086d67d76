"""Runtime configuration: thresholds, BM25/reader parameters, ranking weights.

Everything has a shipped default; a JSON config file overrides field by
field. The data directory defaults to the SITEQA_DATA environment variable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields

from .corpus import DEFAULT_MAX_CHARS, DEFAULT_MIN_CHARS
from .kgstore import DEFAULT_LABEL_PREDICATES
from .ranker import RankWeights
from .reader import DEFAULT_MAX_SPAN_TOKENS, DEFAULT_TIMEOUT_MS
from .retriever import DEFAULT_B, DEFAULT_K1, DEFAULT_TOP_K

DATA_DIR_ENV = "SITEQA_DATA"


@dataclass
class SiteQaConfig:
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    k: int = DEFAULT_TOP_K
    min_chars: int = DEFAULT_MIN_CHARS
    max_chars: int = DEFAULT_MAX_CHARS
    theta_text: float = 0.5
    theta_null: float = 0.5
    max_span_tokens: int = DEFAULT_MAX_SPAN_TOKENS
    reader_mode: str = "baseline"          # baseline | remote
    reader_endpoint: str | None = None
    reader_timeout_ms: int = DEFAULT_TIMEOUT_MS
    label_predicates: list[str] = field(default_factory=lambda: list(DEFAULT_LABEL_PREDICATES))
    enrichment_props: dict[str, str] = field(default_factory=dict)
    weights: RankWeights = field(default_factory=RankWeights)
    low_confidence_cap: int = 5
    cors_origins: list[str] = field(default_factory=lambda: ["*"])


def load_config(path: str | None = None) -> SiteQaConfig:
    config = SiteQaConfig()
    if path is None:
        return config
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if "weights" in raw:
        value = raw.pop("weights")
        config.weights = RankWeights(
            w=tuple(float(x) for x in value["w"]),
            bias=float(value["bias"]),
            theta_kg=float(value.get("theta_kg", config.weights.theta_kg)),
        )
    simple = {f.name for f in fields(SiteQaConfig)} - {"weights"}
    for key, value in raw.items():
        if key == "theta_kg":
            # the KG answer threshold lives with the ranking weights
            config.weights.theta_kg = float(value)
        elif key in simple:
            setattr(config, key, value)
        else:
            raise ValueError(f"unknown config key: {key!r}")
    return config


def default_data_dir() -> str | None:
    return os.environ.get(DATA_DIR_ENV)
