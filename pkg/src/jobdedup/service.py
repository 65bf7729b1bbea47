"""HTTP API: ingestion, duplicate lookups, the review queue and stats.

The service is a read/review front end over artifacts produced by the CLI
(dedup runs write the decision log). Review verdicts are appended to a
feedback log and replayed over the decision set at startup, so the
decision log itself stays append-only and deterministic.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import ServiceConfig
from .embedding import EmbeddingCache
from .errors import NotFoundError
from .pipeline import MatchDecision, duplicate_groups, read_decision_log
from .preprocess import NormalizedPosting, build_normalized
from .store import PostingStore, load_lexicon

VERDICTS = ("confirmed", "rejected")


class ServiceState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = PostingStore(config.store_path)
        self.lexicon = load_lexicon(config.skills_path, config.blacklist_path)
        self.provider = config.provider.build()
        if Path(config.cache_path).exists():
            self.cache = EmbeddingCache.load(config.cache_path)
        else:
            self.cache = EmbeddingCache.for_provider(self.provider)
        self.decisions: dict[tuple[str, str], MatchDecision] = {}
        if Path(config.decisions_path).exists():
            for decision in read_decision_log(config.decisions_path):
                self.decisions[decision.pair_key()] = decision
        self._replay_reviews()
        self._normalized: dict[str, NormalizedPosting] = {}
        self._review_lock = threading.Lock()

    def _replay_reviews(self) -> None:
        path = Path(self.config.reviews_path)
        if not path.exists():
            return
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                fb = json.loads(line)
                decision = self.decisions.get((fb["id_a"], fb["id_b"]))
                if decision is not None and fb["verdict"] in VERDICTS:
                    decision.review = fb["verdict"]

    def normalized(self, posting_id: str) -> NormalizedPosting:
        if posting_id not in self._normalized:
            posting = self.store.get(posting_id)
            self._normalized[posting_id] = build_normalized(posting, self.lexicon)
        return self._normalized[posting_id]

    def submit_review(self, id_a: str, id_b: str, verdict: str, reviewer: str) -> MatchDecision:
        """Atomically update the review status and persist the feedback event."""
        with self._review_lock:
            decision = self.decisions[(id_a, id_b)]
            decision.review = verdict
            feedback = {
                "id_a": id_a,
                "id_b": id_b,
                "verdict": verdict,
                "reviewer": reviewer,
                "submitted_at": datetime.now(timezone.utc).isoformat(),
            }
            path = Path(self.config.reviews_path)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(feedback, ensure_ascii=False) + "\n")
        return decision


def _decision_payload(state: ServiceState, decision: MatchDecision, with_texts: bool = False) -> dict:
    payload = decision.to_dict()
    if with_texts:
        for side, pid in (("a", decision.id_a), ("b", decision.id_b)):
            norm = state.normalized(pid)
            payload[f"title_{side}"] = norm.norm_title
            payload[f"text_{side}"] = norm.norm_description
            payload[f"skill_text_{side}"] = norm.skill_text
    return payload


def create_app(config: ServiceConfig, static_dir: str | Path | None = None) -> FastAPI:
    state = ServiceState(config)
    app = FastAPI(title="jobdedup")
    app.state.dedup = state

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.post("/postings")
    async def ingest_postings(request: Request):
        body = (await request.body()).decode("utf-8")
        if not body.strip():
            return error(400, "empty request body")
        try:
            parsed = json.loads(body)
            if isinstance(parsed, list):
                lines = [json.dumps(item) for item in parsed]
            else:
                lines = [body]
        except json.JSONDecodeError:
            lines = body.splitlines()
        result = state.store.ingest(lines)
        return {
            "ingested": result.ingested,
            "rejected": [
                {"line_no": r.line_no, "reason": r.reason} for r in result.rejected
            ],
        }

    @app.get("/postings/{posting_id}/duplicates")
    def posting_duplicates(posting_id: str):
        try:
            state.store.get(posting_id)
        except NotFoundError:
            return error(404, f"unknown posting id: {posting_id}")
        involved = [
            d for key, d in sorted(state.decisions.items())
            if posting_id in key
        ]
        return {"posting_id": posting_id,
                "decisions": [_decision_payload(state, d, with_texts=True) for d in involved]}

    @app.get("/review/queue")
    def review_queue(status: str = "unreviewed", offset: int = 0, limit: int = 20):
        if status not in ("unreviewed", "confirmed", "rejected", "all"):
            return error(400, f"unknown review status: {status}")
        flagged = [
            d for key, d in sorted(state.decisions.items())
            if d.is_duplicate and (status == "all" or d.review == status)
        ]
        page = flagged[offset:offset + limit]
        return {
            "total": len(flagged),
            "offset": offset,
            "limit": limit,
            "items": [_decision_payload(state, d, with_texts=True) for d in page],
        }

    @app.post("/review/{id_a}/{id_b}")
    async def review(id_a: str, id_b: str, request: Request):
        try:
            body = json.loads((await request.body()).decode("utf-8") or "{}")
        except json.JSONDecodeError:
            return error(400, "request body is not valid JSON")
        verdict = body.get("verdict")
        if verdict not in VERDICTS:
            return error(400, f"invalid verdict: {verdict!r}")
        decision = state.decisions.get((id_a, id_b))
        if decision is None:
            return error(404, f"no decision for pair ({id_a}, {id_b})")
        if not decision.is_duplicate:
            return error(409, "pair was not flagged as duplicate; nothing to review")
        updated = state.submit_review(id_a, id_b, verdict, str(body.get("reviewer", "")))
        return _decision_payload(state, updated)

    @app.get("/stats")
    def stats():
        decisions = list(state.decisions.values())
        summary = duplicate_groups(decisions)
        return {
            "postings": len(state.store),
            "comparisons": len(decisions),
            "duplicates": sum(1 for d in decisions if d.is_duplicate),
            "groups": summary.group_count,
            "mean_group_size": summary.mean_group_size,
            "unique_postings": summary.unique_postings,
        }

    @app.get("/config")
    def get_config():
        return state.config.thresholds.to_dict()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
