"""Inverse-frequency skill weights and the weighted skill score.

A term's document frequency f(s) counts the postings whose skill set
contains it; its weight is w(s) = 1/f(s), so ubiquitous skills contribute
little and rare skills dominate. Terms never seen in the corpus default to
weight 1.0 (a brand-new skill is maximally specific).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .errors import ConfigurationError
from .preprocess import NormalizedPosting

UNSEEN_WEIGHT = 1.0


@dataclass(frozen=True)
class SkillWeights:
    freq: dict[str, int]
    corpus_size: int
    built_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def weight(self, term: str) -> float:
        f = self.freq.get(term)
        return UNSEEN_WEIGHT if f is None else 1.0 / f

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps({"corpus_size": self.corpus_size, "freq": self.freq}, ensure_ascii=False),
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "SkillWeights":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(freq={str(k): int(v) for k, v in obj["freq"].items()},
                   corpus_size=int(obj["corpus_size"]))


def compute_weights(corpus: Iterable[NormalizedPosting]) -> SkillWeights:
    """Document frequencies over the corpus; weights derive as 1/f."""
    freq: dict[str, int] = {}
    size = 0
    for posting in corpus:
        size += 1
        for term in posting.distinct_skills:
            freq[term] = freq.get(term, 0) + 1
    if size == 0:
        raise ConfigurationError("cannot compute skill weights over an empty corpus")
    return SkillWeights(freq=freq, corpus_size=size)


def update_weights(weights: SkillWeights, new_postings: Iterable[NormalizedPosting]) -> SkillWeights:
    """New snapshot equivalent to recomputing over old corpus plus new postings."""
    freq = dict(weights.freq)
    size = weights.corpus_size
    for posting in new_postings:
        size += 1
        for term in posting.distinct_skills:
            freq[term] = freq.get(term, 0) + 1
    return SkillWeights(freq=freq, corpus_size=size)


def wss(a: NormalizedPosting, b: NormalizedPosting, weights: SkillWeights) -> tuple[float, float, float]:
    """(forward, backward, final) weighted skill score.

    Each direction is the weight sum over the skill intersection divided
    by the weight sum over the source's skills; a side with no skills
    scores 0. Final is the mean of both directions.
    """
    set_a, set_b = a.distinct_skills, b.distinct_skills
    common = set_a & set_b
    common_sum = sum(weights.weight(t) for t in common)

    def directional(source: frozenset[str]) -> float:
        if not source:
            return 0.0
        return common_sum / sum(weights.weight(t) for t in source)

    forward = directional(set_a)
    backward = directional(set_b)
    return forward, backward, (forward + backward) / 2
