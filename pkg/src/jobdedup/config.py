"""Service configuration: a single JSON file plus an env override for the
listen address (JOBDEDUP_LISTEN)."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .embedding import EmbeddingProvider, LocalTrigramProvider, RemoteHttpProvider
from .errors import ConfigurationError
from .pipeline import ThresholdConfig

LISTEN_ENV_VAR = "JOBDEDUP_LISTEN"


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "local"  # "local" | "remote"
    dim: int = 256
    seed: int = 0
    endpoint: str = ""
    timeout: float = 10.0

    def build(self) -> EmbeddingProvider:
        if self.kind == "local":
            return LocalTrigramProvider(dim=self.dim, seed=self.seed)
        if self.kind == "remote":
            if not self.endpoint:
                raise ConfigurationError("remote provider requires an endpoint")
            return RemoteHttpProvider(self.endpoint, dim=self.dim, timeout=self.timeout)
        raise ConfigurationError(f"unknown provider kind: {self.kind!r}")


@dataclass(frozen=True)
class ServiceConfig:
    store_path: Path
    skills_path: Path
    blacklist_path: Path | None
    weights_path: Path
    cache_path: Path
    decisions_path: Path
    reviews_path: Path
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    thresholds: ThresholdConfig = field(default_factory=ThresholdConfig)
    listen: str = "127.0.0.1:8000"

    @classmethod
    def load(cls, path: str | Path) -> "ServiceConfig":
        base = Path(path).parent
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc

        def p(key: str, default: str | None = None) -> Path | None:
            raw = obj.get(key, default)
            if raw is None:
                return None
            resolved = Path(raw)
            return resolved if resolved.is_absolute() else base / resolved

        skills = p("skills_path")
        if skills is None:
            raise ConfigurationError("config is missing skills_path")
        provider = ProviderConfig(**obj.get("provider", {}))
        try:
            thresholds = ThresholdConfig.from_dict(obj["thresholds"]) if "thresholds" in obj \
                else ThresholdConfig()
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad thresholds: {exc}") from exc
        listen = os.environ.get(LISTEN_ENV_VAR, obj.get("listen", "127.0.0.1:8000"))
        return cls(
            store_path=p("store_path", "postings.jsonl"),
            skills_path=skills,
            blacklist_path=p("blacklist_path"),
            weights_path=p("weights_path", "weights.json"),
            cache_path=p("cache_path", "embeddings.cache"),
            decisions_path=p("decisions_path", "decisions.jsonl"),
            reviews_path=p("reviews_path", "reviews.jsonl"),
            provider=provider,
            thresholds=thresholds,
            listen=listen,
        )
