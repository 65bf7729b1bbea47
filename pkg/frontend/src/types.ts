/** Shapes returned by the dedup service HTTP API. */

export interface ScoreBreakdown {
  tos: number;
  sos: number;
  tes: number;
  ses: number;
  ttes: number;
  aes: number;
  wss: number;
  ts: number;
  /** Forward match blocks as [aStart, bStart, length] character offsets. */
  blocks: [number, number, number][];
}

export type ReviewStatus = "unreviewed" | "confirmed" | "rejected";
export type Verdict = "confirmed" | "rejected";

export interface QueueItem {
  id_a: string;
  id_b: string;
  status: string;
  is_duplicate: boolean;
  breakdown: ScoreBreakdown;
  review: ReviewStatus;
  title_a: string;
  title_b: string;
  text_a: string;
  text_b: string;
  skill_text_a: string;
  skill_text_b: string;
}

export interface QueuePage {
  total: number;
  offset: number;
  limit: number;
  items: QueueItem[];
}

export interface Stats {
  postings: number;
  comparisons: number;
  duplicates: number;
  groups: number;
  mean_group_size: number;
  unique_postings: number;
}

export interface ThresholdConfig {
  mode: string;
  ts_threshold: number;
  component_floor: number;
  window_days: number;
}

export function pairKey(item: Pick<QueueItem, "id_a" | "id_b">): string {
  return `${item.id_a}::${item.id_b}`;
}
