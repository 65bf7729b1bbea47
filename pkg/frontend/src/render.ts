import { rangesFor, segmentsFor, type Side } from "./highlight.js";
import type { QueueItem, Stats, ThresholdConfig } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Description text with <mark> spans over the matched character ranges. */
export function renderHighlightedText(
  doc: Document,
  text: string,
  blocks: [number, number, number][],
  side: Side,
): HTMLElement {
  const container = el(doc, "div", "pair-text");
  const ranges = rangesFor(blocks, side, text.length);
  if (ranges === null) {
    container.appendChild(el(doc, "p", "warning", "match offsets are inconsistent; showing plain text"));
    container.appendChild(el(doc, "span", undefined, text));
    return container;
  }
  for (const segment of segmentsFor(text, ranges)) {
    if (segment.highlighted) {
      container.appendChild(el(doc, "mark", "block", segment.text));
    } else {
      container.appendChild(el(doc, "span", undefined, segment.text));
    }
  }
  return container;
}

const SCORE_LABELS: [keyof QueueItem["breakdown"] & string, string][] = [
  ["tos", "TOS"],
  ["sos", "SOS"],
  ["tes", "TES"],
  ["ses", "SES"],
  ["ttes", "TTES"],
  ["aes", "AES"],
  ["wss", "WSS"],
  ["ts", "TS"],
];

export function renderScorePanel(
  doc: Document,
  item: QueueItem,
  thresholds: ThresholdConfig | null,
): HTMLElement {
  const panel = el(doc, "dl", "scores");
  for (const [name, label] of SCORE_LABELS) {
    const value = item.breakdown[name] as number;
    panel.appendChild(el(doc, "dt", undefined, label));
    panel.appendChild(el(doc, "dd", `score-${name}`, value.toFixed(4)));
  }
  if (thresholds) {
    panel.appendChild(el(doc, "dt", undefined, "thresholds"));
    panel.appendChild(
      el(
        doc,
        "dd",
        "thresholds",
        `${thresholds.mode}: ts ≥ ${thresholds.ts_threshold}, floor ${thresholds.component_floor}`,
      ),
    );
  }
  return panel;
}

export interface PairActions {
  onVerdict(item: QueueItem, verdict: "confirmed" | "rejected"): void;
}

function renderSide(doc: Document, item: QueueItem, side: Side): HTMLElement {
  const column = el(doc, "article", "pair-side");
  const id = side === "a" ? item.id_a : item.id_b;
  const title = side === "a" ? item.title_a : item.title_b;
  const text = side === "a" ? item.text_a : item.text_b;
  const skills = side === "a" ? item.skill_text_a : item.skill_text_b;
  column.appendChild(el(doc, "h3", undefined, `${id} — ${title}`));
  column.appendChild(renderHighlightedText(doc, text, item.breakdown.blocks, side));
  column.appendChild(el(doc, "p", "skills", skills ? `skills: ${skills}` : "skills: (none)"));
  return column;
}

export function renderPair(
  doc: Document,
  item: QueueItem,
  thresholds: ThresholdConfig | null,
  actions: PairActions,
): HTMLElement {
  const card = el(doc, "section", "pair");
  card.dataset.pair = `${item.id_a}::${item.id_b}`;
  card.dataset.ts = String(item.breakdown.ts);
  const columns = el(doc, "div", "pair-columns");
  columns.appendChild(renderSide(doc, item, "a"));
  columns.appendChild(renderSide(doc, item, "b"));
  card.appendChild(columns);
  card.appendChild(renderScorePanel(doc, item, thresholds));
  const buttons = el(doc, "div", "actions");
  const confirm = el(doc, "button", "confirm", "Confirm duplicate");
  confirm.addEventListener("click", () => actions.onVerdict(item, "confirmed"));
  const reject = el(doc, "button", "reject", "Reject");
  reject.addEventListener("click", () => actions.onVerdict(item, "rejected"));
  buttons.appendChild(confirm);
  buttons.appendChild(reject);
  card.appendChild(buttons);
  return card;
}

export function renderQueue(
  doc: Document,
  root: HTMLElement,
  items: QueueItem[],
  thresholds: ThresholdConfig | null,
  actions: PairActions,
): void {
  root.textContent = "";
  if (items.length === 0) {
    root.appendChild(el(doc, "p", "empty", "Queue is empty — nothing left to review."));
    return;
  }
  for (const item of items) {
    root.appendChild(renderPair(doc, item, thresholds, actions));
  }
}

export function renderStats(doc: Document, root: HTMLElement, stats: Stats): void {
  root.textContent = "";
  const rows: [string, number][] = [
    ["postings", stats.postings],
    ["comparisons", stats.comparisons],
    ["duplicates", stats.duplicates],
    ["groups", stats.groups],
    ["mean group size", stats.mean_group_size],
    ["unique postings", stats.unique_postings],
  ];
  const dl = el(doc, "dl", "stats");
  for (const [label, value] of rows) {
    dl.appendChild(el(doc, "dt", undefined, label));
    dl.appendChild(el(doc, "dd", undefined, String(value)));
  }
  root.appendChild(dl);
}

/** Dismissable error banner with a retry hook. */
export function renderError(
  doc: Document,
  root: HTMLElement,
  message: string | null,
  onRetry: () => void,
): void {
  root.textContent = "";
  if (message === null) return;
  const banner = el(doc, "div", "error-banner");
  banner.appendChild(el(doc, "span", undefined, message));
  const retry = el(doc, "button", "retry", "Retry");
  retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  root.appendChild(banner);
}
