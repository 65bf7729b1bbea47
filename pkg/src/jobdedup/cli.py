"""Command-line front door: ingestion, weights, dedup runs, scoring and eval."""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from .config import ServiceConfig
from .embedding import EmbeddingCache
from .errors import JobDedupError
from .evalkit import (
    evaluate,
    format_table,
    score_distribution_export,
    sweep,
)
from .pipeline import (
    SCORE_NAMES,
    run_dedup,
    score_pair,
    write_decision_log,
)
from .preprocess import build_normalized
from .store import PostingStore, load_labeled_pairs, load_lexicon
from .weights import SkillWeights, compute_weights


class Runtime:
    """Lazily opened shared components for one CLI invocation."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = PostingStore(config.store_path)
        self.lexicon = load_lexicon(config.skills_path, config.blacklist_path)
        self.provider = config.provider.build()
        if Path(config.cache_path).exists():
            self.cache = EmbeddingCache.load(config.cache_path)
        else:
            self.cache = EmbeddingCache.for_provider(self.provider)
        self._weights: SkillWeights | None = None
        self._normalized: dict[str, object] = {}

    @property
    def weights(self) -> SkillWeights:
        if self._weights is None:
            if Path(self.config.weights_path).exists():
                self._weights = SkillWeights.load(self.config.weights_path)
            else:
                self._weights = compute_weights(
                    build_normalized(p, self.lexicon) for p in self.store.all()
                )
        return self._weights

    def normalized(self, posting_id: str):
        if posting_id not in self._normalized:
            posting = self.store.get(posting_id)
            self._normalized[posting_id] = build_normalized(posting, self.lexicon)
        return self._normalized[posting_id]

    def save_cache(self) -> None:
        Path(self.config.cache_path).parent.mkdir(parents=True, exist_ok=True)
        self.cache.save(self.config.cache_path)

    def breakdowns_for(self, pairs):
        out = {}
        for pair in pairs:
            out[(pair.id_a, pair.id_b)] = score_pair(
                self.normalized(pair.id_a), self.normalized(pair.id_b),
                self.provider, self.cache, self.weights,
            )
        return out


@click.group()
@click.option("--config", "config_path", default="jobdedup.json", show_default=True,
              type=click.Path(), help="Path to the JSON config file.")
@click.pass_context
def main(ctx: click.Context, config_path: str):
    """Near-duplicate detection for job postings."""
    ctx.obj = config_path


def _runtime(ctx: click.Context) -> Runtime:
    try:
        return Runtime(ServiceConfig.load(ctx.obj))
    except JobDedupError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.pass_context
def ingest(ctx: click.Context, file: str):
    """Ingest a JSONL postings file into the store."""
    rt = _runtime(ctx)
    result = rt.store.ingest_file(file)
    click.echo(f"ingested {result.ingested} postings, rejected {len(result.rejected)}")
    for r in result.rejected:
        click.echo(f"  line {r.line_no}: {r.reason}", err=True)


@main.group()
def weights():
    """Skill weight table maintenance."""


@weights.command("rebuild")
@click.pass_context
def weights_rebuild(ctx: click.Context):
    """Recompute skill weights from the full posting store."""
    rt = _runtime(ctx)
    try:
        table = compute_weights(build_normalized(p, rt.lexicon) for p in rt.store.all())
    except JobDedupError as exc:
        raise click.ClickException(str(exc))
    Path(rt.config.weights_path).parent.mkdir(parents=True, exist_ok=True)
    table.save(rt.config.weights_path)
    click.echo(f"weights rebuilt over {table.corpus_size} postings "
               f"({len(table.freq)} terms) -> {rt.config.weights_path}")


@main.group()
def dedup():
    """Duplicate detection runs."""


@dedup.command("run")
@click.option("--since", type=str, default=None,
              help="Only treat postings published on/after this ISO date as new.")
@click.option("--out", type=click.Path(), default=None,
              help="Decision log path (defaults to the configured decisions_path).")
@click.pass_context
def dedup_run(ctx: click.Context, since: str | None, out: str | None):
    """Score new postings against their time-window candidates."""
    rt = _runtime(ctx)
    postings = rt.store.all()
    if since is not None:
        try:
            cutoff = date.fromisoformat(since)
        except ValueError:
            raise click.ClickException(f"invalid --since date: {since!r}")
        postings = [p for p in postings if p.published_at >= cutoff]
    if postings:
        try:
            decisions = run_dedup(postings, rt.store, rt.lexicon, rt.config.thresholds,
                                  rt.provider, rt.cache, rt.weights)
        except JobDedupError as exc:
            raise click.ClickException(str(exc))
    else:
        decisions = []
    target = Path(out) if out else Path(rt.config.decisions_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    write_decision_log(decisions, target)
    rt.save_cache()
    duplicates = sum(1 for d in decisions if d.is_duplicate)
    unscored = sum(1 for d in decisions if d.status == "unscored")
    click.echo(f"{len(decisions)} comparisons, {duplicates} duplicates, "
               f"{unscored} unscored -> {target}")


@main.command()
@click.argument("id_a")
@click.argument("id_b")
@click.pass_context
def score(ctx: click.Context, id_a: str, id_b: str):
    """Print the full score breakdown for a posting pair."""
    rt = _runtime(ctx)
    try:
        breakdown = score_pair(rt.normalized(id_a), rt.normalized(id_b),
                               rt.provider, rt.cache, rt.weights)
    except JobDedupError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(breakdown.to_dict(), indent=2))


@main.command("eval")
@click.argument("labeled_file", type=click.Path(exists=True))
@click.option("--score", "score_name", default="ts", show_default=True,
              type=click.Choice(SCORE_NAMES))
@click.option("--th", type=float, default=None, help="Single threshold to evaluate.")
@click.option("--sweep", "do_sweep", is_flag=True, help="Sweep thresholds 0.00..1.00.")
@click.pass_context
def eval_cmd(ctx: click.Context, labeled_file: str, score_name: str,
             th: float | None, do_sweep: bool):
    """Evaluate a score against a labeled pair set."""
    if th is None and not do_sweep:
        raise click.UsageError("pass --th X or --sweep")
    rt = _runtime(ctx)
    try:
        labeled = load_labeled_pairs(labeled_file, rt.store)
        breakdowns = rt.breakdowns_for(labeled)
        if do_sweep:
            rows, best = sweep(labeled, breakdowns, score_name)
            click.echo(format_table(rows))
            click.echo(f"best F1 threshold: {best:.2f}")
        else:
            row = evaluate(labeled, breakdowns, score_name, th)
            click.echo(format_table([row]))
    except (JobDedupError, ValueError) as exc:
        raise click.ClickException(str(exc))
    rt.save_cache()


@main.command("export-plot-data")
@click.argument("labeled_file", type=click.Path(exists=True))
@click.argument("out", type=click.Path())
@click.option("--score", "score_name", default="ts", show_default=True,
              type=click.Choice(SCORE_NAMES))
@click.pass_context
def export_plot_data(ctx: click.Context, labeled_file: str, out: str, score_name: str):
    """Write per-pair score/label CSV for external plotting."""
    rt = _runtime(ctx)
    try:
        labeled = load_labeled_pairs(labeled_file, rt.store)
        breakdowns = rt.breakdowns_for(labeled)
        score_distribution_export(labeled, breakdowns, score_name, out)
    except (JobDedupError, ValueError) as exc:
        raise click.ClickException(str(exc))
    rt.save_cache()
    click.echo(f"wrote {len(labeled)} rows -> {out}")


@main.command()
@click.option("--static-dir", type=click.Path(), default=None,
              help="Directory of review UI static files to serve at /.")
@click.pass_context
def serve(ctx: click.Context, static_dir: str | None):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    try:
        config = ServiceConfig.load(ctx.obj)
        app = create_app(config, static_dir=static_dir)
    except JobDedupError as exc:
        raise click.ClickException(str(exc))
    host, _, port = config.listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    sys.exit(main())
