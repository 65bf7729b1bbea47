"""Posting store, skill lexicon and labeled pair sets.

Postings are persisted append-only as UTF-8 JSONL; an in-memory index is
rebuilt when the store is opened. Reads are safe from multiple threads,
writes are serialized through a single lock.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ConfigurationError, NotFoundError

MAX_LEXICON_TERM_LEN = 64


@dataclass(frozen=True)
class JobPosting:
    id: str
    title: str
    description: str
    published_at: date
    source: str
    extra: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "title": self.title,
            "description": self.description,
            "published_at": self.published_at.isoformat(),
            "source": self.source,
        }
        if self.extra:
            d["extra"] = dict(self.extra)
        return d


def parse_posting(obj: dict) -> JobPosting:
    """Validate a raw record; raises ValueError with a rejection reason."""
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    pid = obj.get("id")
    if not isinstance(pid, str) or not pid:
        raise ValueError("empty id")
    description = obj.get("description")
    if not isinstance(description, str) or not description:
        raise ValueError("empty description")
    title = obj.get("title", "")
    if not isinstance(title, str):
        raise ValueError("title is not a string")
    raw_date = obj.get("published_at")
    if not isinstance(raw_date, str):
        raise ValueError("missing published_at")
    try:
        published_at = date.fromisoformat(raw_date)
    except ValueError:
        raise ValueError(f"invalid published_at: {raw_date!r}")
    source = obj.get("source", "")
    if not isinstance(source, str):
        raise ValueError("source is not a string")
    extra = obj.get("extra") or {}
    if not isinstance(extra, dict):
        raise ValueError("extra is not an object")
    extra = {str(k): str(v) for k, v in extra.items()}
    return JobPosting(pid, title, description, published_at, source, extra)


@dataclass(frozen=True)
class RejectedRecord:
    line_no: int
    reason: str
    raw: str


@dataclass(frozen=True)
class IngestResult:
    ingested: int
    rejected: list[RejectedRecord]


class PostingStore:
    """Append-only JSONL posting store with an in-memory id index."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._postings: dict[str, JobPosting] = {}
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    posting = parse_posting(json.loads(line))
                    self._postings[posting.id] = posting

    def __len__(self) -> int:
        return len(self._postings)

    def __contains__(self, posting_id: str) -> bool:
        return posting_id in self._postings

    def get(self, posting_id: str) -> JobPosting:
        try:
            return self._postings[posting_id]
        except KeyError:
            raise NotFoundError(f"unknown posting id: {posting_id!r}")

    def all(self) -> list[JobPosting]:
        """Snapshot of all postings, ordered by id."""
        return [self._postings[k] for k in sorted(self._postings)]

    def ingest(self, lines: Iterable[str]) -> IngestResult:
        """Ingest line-delimited JSON records.

        Malformed records are rejected individually; the run continues.
        Records whose id already exists in the store are rejected with
        reason "duplicate id", so re-ingesting a file is a no-op.
        """
        accepted: list[JobPosting] = []
        rejected: list[RejectedRecord] = []
        with self._lock:
            seen = set(self._postings)
            for line_no, line in enumerate(lines, start=1):
                raw = line.strip()
                if not raw:
                    continue
                try:
                    posting = parse_posting(json.loads(raw))
                except json.JSONDecodeError:
                    rejected.append(RejectedRecord(line_no, "malformed JSON", raw))
                    continue
                except ValueError as exc:
                    rejected.append(RejectedRecord(line_no, str(exc), raw))
                    continue
                if posting.id in seen:
                    rejected.append(RejectedRecord(line_no, "duplicate id", raw))
                    continue
                seen.add(posting.id)
                accepted.append(posting)
            if accepted:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as fh:
                    for posting in accepted:
                        fh.write(json.dumps(posting.to_dict(), ensure_ascii=False))
                        fh.write("\n")
                for posting in accepted:
                    self._postings[posting.id] = posting
        return IngestResult(len(accepted), rejected)

    def ingest_file(self, path: str | Path) -> IngestResult:
        with open(path, encoding="utf-8") as fh:
            return self.ingest(fh)

    def candidates(self, posting_id: str, window_days: int) -> list[JobPosting]:
        """All other postings published within window_days of the given one.

        The window is two-sided; results are ordered by id.
        """
        if window_days < 0:
            raise ValueError("window_days must be >= 0")
        center = self.get(posting_id).published_at
        out = [
            p
            for p in self._postings.values()
            if p.id != posting_id and abs((p.published_at - center).days) <= window_days
        ]
        out.sort(key=lambda p: p.id)
        return out


@dataclass(frozen=True)
class SkillLexicon:
    skills: frozenset[str]
    blacklist: frozenset[str]

    @property
    def effective(self) -> frozenset[str]:
        return self.skills - self.blacklist


def _read_terms(path: str | Path) -> set[str]:
    terms: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.lstrip().startswith("#"):
                continue
            term = line.strip().lower()
            if not term:
                continue
            if len(term) > MAX_LEXICON_TERM_LEN:
                continue  # defends against corrupt auto-generated entries
            terms.add(term)
    return terms


def load_lexicon(skills_path: str | Path, blacklist_path: str | Path | None = None) -> SkillLexicon:
    """Load skill and blacklist term files (one term per line, # comments)."""
    skills = _read_terms(skills_path)
    blacklist: set[str] = set()
    if blacklist_path is not None and Path(blacklist_path).exists():
        blacklist = _read_terms(blacklist_path)
    lexicon = SkillLexicon(frozenset(skills), frozenset(blacklist))
    if not lexicon.effective:
        raise ConfigurationError("effective skill lexicon is empty")
    return lexicon


@dataclass(frozen=True)
class LabeledPair:
    id_a: str
    id_b: str
    label: str  # "duplicate" | "non_duplicate"


def load_labeled_pairs(path: str | Path, store: PostingStore | None = None) -> list[LabeledPair]:
    """Load a JSONL labeled pair set; optionally check ids against a store."""
    pairs: list[LabeledPair] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            id_a, id_b, label = obj["id_a"], obj["id_b"], obj["label"]
            if label not in ("duplicate", "non_duplicate"):
                raise ValueError(f"line {line_no}: bad label {label!r}")
            if id_a == id_b:
                raise ValueError(f"line {line_no}: pair references the same id")
            if store is not None:
                store.get(id_a)
                store.get(id_b)
            pairs.append(LabeledPair(id_a, id_b, label))
    return pairs


def iter_pairs(pairs: list[LabeledPair]) -> Iterator[tuple[str, str]]:
    for p in pairs:
        yield p.id_a, p.id_b
