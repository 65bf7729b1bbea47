"""Precision/recall/F1 evaluation and threshold sweeps over labeled pairs."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import EvaluationError
from .pipeline import ScoreBreakdown
from .store import LabeledPair

DEFAULT_GRID = [round(i * 0.01, 2) for i in range(101)]

Breakdowns = Mapping[tuple[str, str], ScoreBreakdown]


@dataclass(frozen=True)
class EvalRow:
    score_name: str
    threshold: float
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float


def _lookup(breakdowns: Breakdowns, id_a: str, id_b: str) -> ScoreBreakdown | None:
    hit = breakdowns.get((id_a, id_b))
    if hit is None:
        hit = breakdowns.get((id_b, id_a))
    return hit


def _check_coverage(labeled: list[LabeledPair], breakdowns: Breakdowns) -> None:
    missing = [(p.id_a, p.id_b) for p in labeled if _lookup(breakdowns, p.id_a, p.id_b) is None]
    if missing:
        raise EvaluationError(f"missing breakdowns for pairs: {missing}")


def evaluate(
    labeled: list[LabeledPair],
    breakdowns: Breakdowns,
    score_name: str,
    threshold: float,
) -> EvalRow:
    """Confusion counts and P/R/F1 with predicted-duplicate iff score >= threshold.

    Zero denominators yield 0 for the affected metric.
    """
    _check_coverage(labeled, breakdowns)
    tp = fp = fn = tn = 0
    for pair in labeled:
        score = _lookup(breakdowns, pair.id_a, pair.id_b).score(score_name)
        predicted = score >= threshold
        actual = pair.label == "duplicate"
        if predicted and actual:
            tp += 1
        elif predicted and not actual:
            fp += 1
        elif not predicted and actual:
            fn += 1
        else:
            tn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalRow(score_name, threshold, tp, fp, fn, tn, precision, recall, f1)


def sweep(
    labeled: list[LabeledPair],
    breakdowns: Breakdowns,
    score_name: str,
    grid: list[float] | None = None,
) -> tuple[list[EvalRow], float]:
    """One row per grid threshold plus the argmax-F1 threshold (ties: smallest)."""
    if grid is None:
        grid = DEFAULT_GRID
    if not grid:
        raise ValueError("threshold grid is empty")
    for th in grid:
        if not 0.0 <= th <= 1.0:
            raise ValueError(f"threshold out of [0,1]: {th}")
    rows = [evaluate(labeled, breakdowns, score_name, th) for th in sorted(grid)]
    best = max(rows, key=lambda r: (r.f1, -r.threshold))
    return rows, best.threshold


def score_distribution_export(
    labeled: list[LabeledPair],
    breakdowns: Breakdowns,
    score_name: str,
    path: str | Path,
) -> None:
    """CSV of per-pair scores and labels, enough to re-plot score scatter."""
    _check_coverage(labeled, breakdowns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair_id_a", "pair_id_b", "label", "score"])
        for pair in labeled:
            score = _lookup(breakdowns, pair.id_a, pair.id_b).score(score_name)
            writer.writerow([pair.id_a, pair.id_b, pair.label, repr(score)])


def format_table(rows: list[EvalRow]) -> str:
    """Aligned text table with the TH / P / R / F1 columns plus raw counts."""
    header = ["Score", "TH", "P", "R", "F1", "TP", "FP", "FN", "TN"]
    body = [
        [
            r.score_name,
            f"{r.threshold:.2f}",
            f"{r.precision:.2f}",
            f"{r.recall:.2f}",
            f"{r.f1:.2f}",
            str(r.tp),
            str(r.fp),
            str(r.fn),
            str(r.tn),
        ]
        for r in rows
    ]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row))
             for row in [header] + body]
    return "\n".join(lines)


def rows_to_csv(rows: list[EvalRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["score_name", "threshold", "tp", "fp", "fn", "tn",
                     "precision", "recall", "f1"])
    for r in rows:
        writer.writerow([r.score_name, r.threshold, r.tp, r.fp, r.fn, r.tn,
                         r.precision, r.recall, r.f1])
    return buf.getvalue()
