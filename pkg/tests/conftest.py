import sys
from datetime import date, timedelta
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jobdedup.embedding import EmbeddingCache, LocalTrigramProvider
from jobdedup.preprocess import build_normalized
from jobdedup.store import JobPosting, SkillLexicon


@pytest.fixture
def lexicon():
    return SkillLexicon(
        frozenset({"java", "spring boot", "spring", "c++", "sql", "python",
                   "kubernetes", "docker", "django", "flask", "s/4 hana"}),
        frozenset(),
    )


@pytest.fixture
def provider():
    return LocalTrigramProvider(dim=64, seed=1)


@pytest.fixture
def cache(provider):
    return EmbeddingCache.for_provider(provider)


def make_posting(pid="p1", title="Java Developer", description=None, day=0, source="boardA"):
    if description is None:
        description = ("We are looking for a senior java developer with spring boot "
                       "experience. Knowledge of sql and docker is a plus.")
    return JobPosting(
        id=pid,
        title=title,
        description=description,
        published_at=date(2026, 1, 1) + timedelta(days=day),
        source=source,
    )


@pytest.fixture
def posting_factory():
    return make_posting


@pytest.fixture
def normalized_factory(lexicon):
    def build(**kw):
        return build_normalized(make_posting(**kw), lexicon)
    return build
