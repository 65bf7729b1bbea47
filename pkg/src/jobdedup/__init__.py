"""Near-duplicate detection for job postings.

Combines character-block overlap, embedding cosine similarity and
inverse-frequency weighted skill matching into a total score with
production decision rules, an evaluation harness and a review service.
"""

from .embedding import (
    EmbeddingCache,
    EmbeddingProvider,
    LocalTrigramProvider,
    RemoteHttpProvider,
    cosine_clamped,
    embed_cached,
    embedding_scores,
)
from .errors import (
    CacheFingerprintError,
    ConfigurationError,
    EvaluationError,
    JobDedupError,
    NotFoundError,
    ScoringUnavailableError,
)
from .evalkit import EvalRow, evaluate, score_distribution_export, sweep
from .overlap import (
    MatchBlock,
    OverlapResult,
    directional_overlap,
    matching_blocks,
    sos,
    tos,
)
from .pipeline import (
    MatchDecision,
    ScoreBreakdown,
    ThresholdConfig,
    decide,
    duplicate_groups,
    run_dedup,
    score_pair,
)
from .preprocess import NormalizedPosting, build_normalized, extract_skills, normalize_text
from .store import (
    JobPosting,
    LabeledPair,
    PostingStore,
    SkillLexicon,
    load_labeled_pairs,
    load_lexicon,
)
from .weights import SkillWeights, compute_weights, update_weights, wss

__version__ = "0.1.0"
