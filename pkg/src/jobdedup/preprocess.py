"""Text normalization and skill-term extraction.

All scorers run on the normalized views produced here: the cleaned
description, the cleaned title, and the skill text (space-joined skill
terms in document order).
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .store import JobPosting, SkillLexicon

# Characters kept verbatim besides letters, digits and spaces. '+' and '/'
# keep terms like "c++" and "s/4 hana" intact; '#' and '.' keep "c#" and
# ".net".
PRESERVED_SPECIALS = frozenset("+/#.")

_TOKEN_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class NormalizedPosting:
    posting_id: str
    norm_title: str
    norm_description: str
    skill_occurrences: tuple[tuple[str, int], ...]
    skill_text: str
    distinct_skills: frozenset[str]


def normalize_text(raw: str) -> str:
    """Lowercase and strip special characters, keeping `+ / # .`.

    Unicode compatibility composition first, then every character that is
    not a letter, digit, space or preserved special becomes a space; runs
    of whitespace collapse to one space; result is trimmed. Idempotent.
    """
    text = unicodedata.normalize("NFKC", raw).lower()
    chars = [
        c if (c.isalnum() or c in PRESERVED_SPECIALS) else " "
        for c in text
    ]
    return " ".join("".join(chars).split())


def extract_skills(norm_text: str, lexicon: SkillLexicon) -> list[tuple[str, int]]:
    """Scan normalized text for lexicon terms on word boundaries.

    Left-to-right; at each token the longest matching term (most words)
    wins and its tokens are consumed, so matches never overlap.
    Blacklisted terms never match. Returns (term, char offset) in document
    order, duplicates retained.
    """
    effective = lexicon.effective
    if not norm_text or not effective:
        return []
    # term word-tuples grouped by first word, longest candidates first
    by_first: dict[str, list[tuple[str, ...]]] = {}
    for term in effective:
        words = tuple(term.split())
        by_first.setdefault(words[0], []).append(words)
    for cands in by_first.values():
        cands.sort(key=len, reverse=True)

    tokens = [(m.start(), m.group()) for m in _TOKEN_RE.finditer(norm_text)]
    out: list[tuple[str, int]] = []
    i = 0
    while i < len(tokens):
        start, word = tokens[i]
        matched = False
        for cand in by_first.get(word, ()):
            n = len(cand)
            if i + n <= len(tokens) and tuple(t[1] for t in tokens[i:i + n]) == cand:
                out.append((" ".join(cand), start))
                i += n
                matched = True
                break
        if not matched:
            i += 1
    return out


def build_normalized(posting: JobPosting, lexicon: SkillLexicon) -> NormalizedPosting:
    """Normalize title and description and extract skills from the description."""
    norm_title = normalize_text(posting.title)
    norm_description = normalize_text(posting.description)
    occurrences = extract_skills(norm_description, lexicon)
    return NormalizedPosting(
        posting_id=posting.id,
        norm_title=norm_title,
        norm_description=norm_description,
        skill_occurrences=tuple(occurrences),
        skill_text=" ".join(term for term, _ in occurrences),
        distinct_skills=frozenset(term for term, _ in occurrences),
    )
