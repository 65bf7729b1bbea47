"""Pair scoring, decision rules, dedup runs and duplicate grouping.

The total score TS is the arithmetic mean of the three skill-based
components (SOS, SES, WSS). Production runs accept a pair as duplicate
when TS >= 0.6 and every TS component reaches 0.1; validation runs use a
single TS threshold of 0.35.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from . import overlap as overlap_mod
from .embedding import EmbeddingCache, EmbeddingProvider, embedding_scores
from .errors import ScoringUnavailableError
from .overlap import MatchBlock
from .preprocess import NormalizedPosting, build_normalized
from .store import JobPosting, PostingStore, SkillLexicon
from .weights import SkillWeights, wss

SCORE_NAMES = ("tos", "sos", "tes", "ses", "ttes", "aes", "wss", "ts")

PRODUCTION_TS_THRESHOLD = 0.6
PRODUCTION_COMPONENT_FLOOR = 0.1
VALIDATION_TS_THRESHOLD = 0.35
DEFAULT_WINDOW_DAYS = 42


@dataclass(frozen=True)
class ScoreBreakdown:
    tos: float
    sos: float
    tes: float
    ses: float
    ttes: float
    aes: float
    wss: float
    ts: float
    blocks: tuple[MatchBlock, ...] = ()

    @classmethod
    def build(cls, *, tos: float, sos: float, tes: float, ses: float,
              ttes: float, aes: float, wss: float,
              blocks: tuple[MatchBlock, ...] = ()) -> "ScoreBreakdown":
        return cls(tos=tos, sos=sos, tes=tes, ses=ses, ttes=ttes, aes=aes,
                   wss=wss, ts=(sos + ses + wss) / 3, blocks=blocks)

    def score(self, name: str) -> float:
        if name not in SCORE_NAMES:
            raise ValueError(f"unknown score name: {name!r}")
        return getattr(self, name)

    def to_dict(self) -> dict:
        d = {name: round(getattr(self, name), 6) for name in SCORE_NAMES}
        d["blocks"] = [[b.a_start, b.b_start, b.length] for b in self.blocks]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreBreakdown":
        blocks = tuple(MatchBlock(*b) for b in d.get("blocks", []))
        return cls(**{name: float(d[name]) for name in SCORE_NAMES}, blocks=blocks)


@dataclass(frozen=True)
class ThresholdConfig:
    mode: str = "production"  # "validation" | "production"
    ts_threshold: float = PRODUCTION_TS_THRESHOLD
    component_floor: float = PRODUCTION_COMPONENT_FLOOR
    per_score_thresholds: dict[str, float] = field(default_factory=dict)
    window_days: int = DEFAULT_WINDOW_DAYS
    floor_all_scores: bool = False  # apply the floor to all seven scores

    def __post_init__(self):
        if self.mode not in ("validation", "production"):
            raise ValueError(f"unknown mode: {self.mode!r}")
        for value in (self.ts_threshold, self.component_floor, *self.per_score_thresholds.values()):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"threshold out of [0,1]: {value}")

    @classmethod
    def production(cls, **kw) -> "ThresholdConfig":
        return cls(mode="production", ts_threshold=PRODUCTION_TS_THRESHOLD,
                   component_floor=PRODUCTION_COMPONENT_FLOOR, **kw)

    @classmethod
    def validation(cls, **kw) -> "ThresholdConfig":
        return cls(mode="validation", ts_threshold=VALIDATION_TS_THRESHOLD,
                   component_floor=0.0, **kw)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "ts_threshold": self.ts_threshold,
            "component_floor": self.component_floor,
            "per_score_thresholds": dict(self.per_score_thresholds),
            "window_days": self.window_days,
            "floor_all_scores": self.floor_all_scores,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdConfig":
        return cls(**d)


REVIEW_STATES = ("unreviewed", "confirmed", "rejected")


@dataclass
class MatchDecision:
    id_a: str
    id_b: str
    breakdown: ScoreBreakdown | None
    is_duplicate: bool
    config_snapshot: ThresholdConfig
    decided_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    review: str = "unreviewed"
    status: str = "scored"  # "scored" | "unscored"
    error: str | None = None

    def pair_key(self) -> tuple[str, str]:
        return (self.id_a, self.id_b)

    def to_dict(self) -> dict:
        # decided_at is intentionally not serialized: the decision log is a
        # pure function of store content and config, so repeated runs stay
        # byte-identical. Timestamps belong to the run report.
        return {
            "id_a": self.id_a,
            "id_b": self.id_b,
            "status": self.status,
            "is_duplicate": self.is_duplicate,
            "breakdown": self.breakdown.to_dict() if self.breakdown else None,
            "config": self.config_snapshot.to_dict(),
            "review": self.review,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MatchDecision":
        breakdown = ScoreBreakdown.from_dict(d["breakdown"]) if d.get("breakdown") else None
        return cls(
            id_a=d["id_a"],
            id_b=d["id_b"],
            breakdown=breakdown,
            is_duplicate=bool(d["is_duplicate"]),
            config_snapshot=ThresholdConfig.from_dict(d["config"]),
            review=d.get("review", "unreviewed"),
            status=d.get("status", "scored"),
            error=d.get("error"),
        )


def score_pair(
    a: NormalizedPosting,
    b: NormalizedPosting,
    provider: EmbeddingProvider,
    cache: EmbeddingCache,
    weights: SkillWeights,
) -> ScoreBreakdown:
    """All seven pair scores plus TS; deterministic for fixed inputs."""
    tos_result = overlap_mod.tos(a, b)
    sos_result = overlap_mod.sos(a, b)
    tes, ses, ttes, aes = embedding_scores(a, b, provider, cache)
    _, _, wss_final = wss(a, b, weights)
    return ScoreBreakdown.build(
        tos=tos_result.final,
        sos=sos_result.final,
        tes=tes,
        ses=ses,
        ttes=ttes,
        aes=aes,
        wss=wss_final,
        blocks=tos_result.blocks,
    )


def decide(breakdown: ScoreBreakdown, config: ThresholdConfig) -> bool:
    """Apply the configured decision rule; all comparisons are inclusive."""
    if breakdown.ts < config.ts_threshold:
        return False
    if config.mode == "production":
        if config.floor_all_scores:
            floored = (breakdown.tos, breakdown.sos, breakdown.tes, breakdown.ses,
                       breakdown.ttes, breakdown.aes, breakdown.wss)
        else:
            floored = (breakdown.sos, breakdown.ses, breakdown.wss)
        if min(floored) < config.component_floor:
            return False
    return True


def run_dedup(
    new_postings: Iterable[JobPosting],
    store: PostingStore,
    lexicon: SkillLexicon,
    config: ThresholdConfig,
    provider: EmbeddingProvider,
    cache: EmbeddingCache,
    weights: SkillWeights,
) -> list[MatchDecision]:
    """Score every new posting against its time-window candidates.

    Each unordered pair is decided once (ids in ascending order); pairs
    that fail scoring are emitted with status "unscored" and the run
    continues. Results are sorted by (id_a, id_b).
    """
    normalized: dict[str, NormalizedPosting] = {}

    def norm(posting: JobPosting) -> NormalizedPosting:
        if posting.id not in normalized:
            normalized[posting.id] = build_normalized(posting, lexicon)
        return normalized[posting.id]

    decisions: dict[tuple[str, str], MatchDecision] = {}
    for posting in new_postings:
        for candidate in store.candidates(posting.id, config.window_days):
            key = tuple(sorted((posting.id, candidate.id)))
            if key in decisions:
                continue
            first = posting if key[0] == posting.id else candidate
            second = candidate if first is posting else posting
            try:
                breakdown = score_pair(norm(first), norm(second), provider, cache, weights)
            except ScoringUnavailableError as exc:
                decisions[key] = MatchDecision(
                    id_a=key[0], id_b=key[1], breakdown=None, is_duplicate=False,
                    config_snapshot=config, status="unscored", error=str(exc),
                )
                continue
            decisions[key] = MatchDecision(
                id_a=key[0], id_b=key[1], breakdown=breakdown,
                is_duplicate=decide(breakdown, config), config_snapshot=config,
            )
    return [decisions[k] for k in sorted(decisions)]


def write_decision_log(decisions: Iterable[MatchDecision], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for decision in decisions:
            fh.write(json.dumps(decision.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def append_decision_log(decisions: Iterable[MatchDecision], path: str | Path) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for decision in decisions:
            fh.write(json.dumps(decision.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def read_decision_log(path: str | Path) -> list[MatchDecision]:
    out: list[MatchDecision] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(MatchDecision.from_dict(json.loads(line)))
    return out


@dataclass(frozen=True)
class GroupSummary:
    groups: tuple[frozenset[str], ...]
    group_count: int
    mean_group_size: float
    unique_postings: int


def duplicate_groups(decisions: Iterable[MatchDecision]) -> GroupSummary:
    """Connected components over duplicate pairs, plus summary statistics.

    unique_postings counts each duplicate group once: total ids minus
    grouped ids plus one per group.
    """
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: str, y: str) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    ids: set[str] = set()
    for decision in decisions:
        ids.update((decision.id_a, decision.id_b))
        for pid in (decision.id_a, decision.id_b):
            parent.setdefault(pid, pid)
        if decision.is_duplicate:
            union(decision.id_a, decision.id_b)

    components: dict[str, set[str]] = {}
    for pid in ids:
        components.setdefault(find(pid), set()).add(pid)
    groups = tuple(
        frozenset(members)
        for members in sorted(
            (m for m in components.values() if len(m) > 1), key=lambda m: sorted(m)
        )
    )
    grouped = sum(len(g) for g in groups)
    mean_size = grouped / len(groups) if groups else 0.0
    return GroupSummary(
        groups=groups,
        group_count=len(groups),
        mean_group_size=mean_size,
        unique_postings=len(ids) - grouped + len(groups),
    )
