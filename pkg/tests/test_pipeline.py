import json
import random

import pytest

from jobdedup.embedding import EmbeddingCache, LocalTrigramProvider
from jobdedup.errors import ScoringUnavailableError
from jobdedup.pipeline import (
    MatchDecision,
    ScoreBreakdown,
    ThresholdConfig,
    decide,
    duplicate_groups,
    read_decision_log,
    run_dedup,
    score_pair,
    write_decision_log,
)
from jobdedup.preprocess import build_normalized
from jobdedup.store import PostingStore
from jobdedup.weights import compute_weights

from conftest import make_posting


def breakdown(**kw):
    defaults = dict(tos=0.5, sos=0.5, tes=0.5, ses=0.5, ttes=0.5, aes=0.5, wss=0.5)
    defaults.update(kw)
    return ScoreBreakdown.build(**defaults)


@pytest.fixture
def scoring(lexicon, provider, cache):
    postings = [
        make_posting(pid="a", description="senior java developer with spring boot and docker"),
        make_posting(pid="b", description="senior java developer with spring boot and docker"),
        make_posting(pid="c", description="python and django web engineer"),
    ]
    normalized = {p.id: build_normalized(p, lexicon) for p in postings}
    weights = compute_weights(normalized.values())
    return normalized, weights, provider, cache


class TestScorePair:
    def test_identity_all_ones(self, scoring):
        normalized, weights, provider, cache = scoring
        result = score_pair(normalized["a"], normalized["a"], provider, cache, weights)
        for name in ("tos", "sos", "tes", "ses", "ttes", "aes", "wss", "ts"):
            assert result.score(name) == 1.0

    def test_empty_skill_texts_force_ts_zero(self, lexicon, provider, cache, scoring):
        _, weights, _, _ = scoring
        a = build_normalized(make_posting(pid="x", description="no known terms mentioned here at all"), lexicon)
        b = build_normalized(make_posting(pid="y", description="no known terms mentioned here at all"), lexicon)
        result = score_pair(a, b, provider, cache, weights)
        assert result.tos == 1.0  # identical descriptions still overlap fully
        assert result.sos == 0.0 and result.ses == 0.0 and result.wss == 0.0
        assert result.ts == 0.0

    def test_ts_is_mean_of_skill_scores(self):
        b = breakdown(sos=0.6, ses=0.9, wss=0.3)
        assert b.ts == pytest.approx(0.6)
        assert b.ts == (b.sos + b.ses + b.wss) / 3

    def test_ts_ignores_other_scores(self):
        b1 = breakdown(tos=0.1, tes=0.2, ttes=0.3, aes=0.4)
        b2 = breakdown(tos=0.9, tes=0.8, ttes=0.7, aes=0.6)
        assert b1.ts == b2.ts

    def test_symmetry_all_components(self, scoring):
        normalized, weights, provider, cache = scoring
        ab = score_pair(normalized["a"], normalized["c"], provider, cache, weights)
        ba = score_pair(normalized["c"], normalized["a"], provider, cache, weights)
        for name in ("tos", "sos", "tes", "ses", "ttes", "aes", "wss", "ts"):
            assert abs(ab.score(name) - ba.score(name)) <= 1e-12

    def test_scores_in_unit_interval(self, scoring):
        normalized, weights, provider, cache = scoring
        for x in normalized.values():
            for y in normalized.values():
                result = score_pair(x, y, provider, cache, weights)
                for name in ("tos", "sos", "tes", "ses", "ttes", "aes", "wss", "ts"):
                    assert 0.0 <= result.score(name) <= 1.0


class TestDecide:
    def test_production_accept(self):
        b = breakdown(sos=0.7, ses=0.8, wss=0.6)
        assert b.ts == pytest.approx(0.7)
        assert decide(b, ThresholdConfig.production()) is True

    def test_production_floor_reject(self):
        b = breakdown(sos=0.9, ses=1.0, wss=0.05)
        assert b.ts >= 0.6
        assert decide(b, ThresholdConfig.production()) is False

    def test_validation_boundary_inclusive(self):
        # ts pinned to exactly 0.35: the comparison must be inclusive
        b = ScoreBreakdown(tos=0.5, sos=0.35, tes=0.5, ses=0.35,
                           ttes=0.5, aes=0.5, wss=0.35, ts=0.35)
        assert decide(b, ThresholdConfig.validation()) is True

    def test_validation_below_threshold(self):
        b = breakdown(sos=0.3, ses=0.3, wss=0.3)
        assert decide(b, ThresholdConfig.validation()) is False

    def test_validation_ignores_floor(self):
        b = breakdown(sos=0.05, ses=1.0, wss=1.0)
        assert decide(b, ThresholdConfig.validation()) is True

    def test_seven_score_floor_flag(self):
        b = breakdown(tos=0.05, sos=0.9, ses=0.9, wss=0.9)
        assert decide(b, ThresholdConfig.production()) is True
        assert decide(b, ThresholdConfig.production(floor_all_scores=True)) is False

    def test_monotone_in_components(self):
        config = ThresholdConfig.production()
        rng = random.Random(4)
        for _ in range(200):
            scores = {k: rng.random() for k in ("sos", "ses", "wss")}
            base = breakdown(**scores)
            if decide(base, config):
                name = rng.choice(["sos", "ses", "wss"])
                raised = dict(scores)
                raised[name] = min(1.0, raised[name] + rng.random())
                assert decide(breakdown(**raised), config) is True

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            ThresholdConfig(mode="other")
        with pytest.raises(ValueError):
            ThresholdConfig(ts_threshold=1.5)


class FailingProvider(LocalTrigramProvider):
    def embed(self, text):
        raise ScoringUnavailableError("endpoint down")


class TestRunDedup:
    def _store(self, tmp_path, postings):
        store = PostingStore(tmp_path / "postings.jsonl")
        store.ingest(json.dumps(p.to_dict()) for p in postings)
        return store

    def test_decision_per_candidate(self, tmp_path, lexicon, provider, cache):
        postings = [make_posting(pid=f"p{i}", day=i) for i in range(4)]
        store = self._store(tmp_path, postings)
        weights = compute_weights(build_normalized(p, lexicon) for p in postings)
        config = ThresholdConfig.production(window_days=42)
        decisions = run_dedup([postings[0]], store, lexicon, config,
                              provider, cache, weights)
        assert len(decisions) == 3

    def test_identical_candidate_is_duplicate_in_both_modes(self, tmp_path, lexicon, provider, cache):
        postings = [make_posting(pid="a"), make_posting(pid="b")]
        store = self._store(tmp_path, postings)
        weights = compute_weights(build_normalized(p, lexicon) for p in postings)
        for config in (ThresholdConfig.production(), ThresholdConfig.validation()):
            cache_run = EmbeddingCache.for_provider(provider)
            decisions = run_dedup([postings[0]], store, lexicon, config,
                                  provider, cache_run, weights)
            assert len(decisions) == 1
            assert decisions[0].is_duplicate is True

    def test_no_candidates_no_decisions(self, tmp_path, lexicon, provider, cache):
        postings = [make_posting(pid="a", day=0), make_posting(pid="b", day=300)]
        store = self._store(tmp_path, postings)
        weights = compute_weights(build_normalized(p, lexicon) for p in postings)
        config = ThresholdConfig.production(window_days=42)
        assert run_dedup([postings[0]], store, lexicon, config, provider, cache, weights) == []

    def test_pairs_decided_once_and_sorted(self, tmp_path, lexicon, provider, cache):
        postings = [make_posting(pid=f"p{i}") for i in range(4)]
        store = self._store(tmp_path, postings)
        weights = compute_weights(build_normalized(p, lexicon) for p in postings)
        config = ThresholdConfig.production()
        decisions = run_dedup(postings, store, lexicon, config, provider, cache, weights)
        keys = [(d.id_a, d.id_b) for d in decisions]
        assert keys == sorted(set(keys))
        assert len(keys) == 6  # C(4,2)
        assert all(a < b for a, b in keys)

    def test_provider_failure_yields_unscored(self, tmp_path, lexicon):
        postings = [make_posting(pid="a"), make_posting(pid="b")]
        store = self._store(tmp_path, postings)
        weights = compute_weights(build_normalized(p, lexicon) for p in postings)
        provider = FailingProvider(dim=64, seed=0)
        cache = EmbeddingCache.for_provider(provider)
        decisions = run_dedup([postings[0]], store, lexicon,
                              ThresholdConfig.production(), provider, cache, weights)
        assert len(decisions) == 1
        assert decisions[0].status == "unscored"
        assert decisions[0].is_duplicate is False
        assert "endpoint down" in decisions[0].error


class TestDecisionLog:
    def test_roundtrip(self, tmp_path):
        decision = MatchDecision(
            id_a="a", id_b="b", breakdown=breakdown(),
            is_duplicate=True, config_snapshot=ThresholdConfig.production(),
        )
        path = tmp_path / "decisions.jsonl"
        write_decision_log([decision], path)
        loaded = read_decision_log(path)
        assert len(loaded) == 1
        assert loaded[0].id_a == "a"
        assert loaded[0].is_duplicate is True
        assert loaded[0].breakdown.ts == pytest.approx(decision.breakdown.ts, abs=1e-6)

    def test_scores_rounded_to_six_places(self, tmp_path):
        decision = MatchDecision(
            id_a="a", id_b="b", breakdown=breakdown(sos=1 / 3),
            is_duplicate=False, config_snapshot=ThresholdConfig.production(),
        )
        path = tmp_path / "decisions.jsonl"
        write_decision_log([decision], path)
        obj = json.loads(path.read_text().strip())
        assert obj["breakdown"]["sos"] == 0.333333


class TestDuplicateGroups:
    def decision(self, a, b, dup):
        return MatchDecision(id_a=a, id_b=b, breakdown=breakdown(),
                             is_duplicate=dup,
                             config_snapshot=ThresholdConfig.production())

    def test_transitive_group(self):
        summary = duplicate_groups([
            self.decision("A", "B", True),
            self.decision("B", "C", True),
        ])
        assert summary.groups == (frozenset({"A", "B", "C"}),)
        assert summary.mean_group_size == 3.0
        assert summary.unique_postings == 1

    def test_no_duplicates(self):
        summary = duplicate_groups([self.decision("A", "B", False)])
        assert summary.group_count == 0
        assert summary.mean_group_size == 0.0
        assert summary.unique_postings == 2

    def test_two_pairs_two_groups(self):
        summary = duplicate_groups([
            self.decision("A", "B", True),
            self.decision("C", "D", True),
        ])
        assert summary.group_count == 2
        assert summary.mean_group_size == 2.0
        assert summary.unique_postings == 2

    def test_groups_partition_ids(self):
        rng = random.Random(17)
        ids = [f"n{i}" for i in range(30)]
        decisions = [
            self.decision(*rng.sample(ids, 2), rng.random() < 0.3)
            for _ in range(60)
        ]
        summary = duplicate_groups(decisions)
        seen = set()
        for group in summary.groups:
            assert len(group) >= 2
            assert not (group & seen)
            seen |= group
        universe = {d.id_a for d in decisions} | {d.id_b for d in decisions}
        assert seen <= universe
        assert summary.unique_postings == len(universe) - len(seen) + summary.group_count
