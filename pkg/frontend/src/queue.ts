import { ApiClient, ApiError } from "./api.js";
import { pairKey, type QueueItem, type Verdict } from "./types.js";

/** Unreviewed pairs ordered by descending total score, stable on pair ids. */
export function sortByTotalScore(items: QueueItem[]): QueueItem[] {
  return [...items].sort((x, y) => {
    if (y.breakdown.ts !== x.breakdown.ts) return y.breakdown.ts - x.breakdown.ts;
    return pairKey(x) < pairKey(y) ? -1 : 1;
  });
}

export interface QueueEvents {
  onChange(items: QueueItem[]): void;
  onError(message: string): void;
}

/**
 * Review queue state: loads pages, keeps items sorted by descending ts,
 * applies optimistic removal on verdict submission and rolls back when the
 * server rejects it.
 */
export class QueueController {
  items: QueueItem[] = [];
  total = 0;

  constructor(private api: ApiClient, private events: QueueEvents) {}

  async load(): Promise<void> {
    try {
      const page = await this.api.fetchQueue(0, 200);
      this.total = page.total;
      this.items = sortByTotalScore(page.items);
      this.events.onChange(this.items);
    } catch (err) {
      this.events.onError(err instanceof Error ? err.message : String(err));
    }
  }

  async submit(item: QueueItem, verdict: Verdict, reviewer: string): Promise<boolean> {
    const index = this.items.findIndex((x) => pairKey(x) === pairKey(item));
    if (index === -1) return false;
    const removed = this.items.splice(index, 1)[0];
    this.events.onChange(this.items);
    try {
      await this.api.submitVerdict(item.id_a, item.id_b, verdict, reviewer);
      this.total -= 1;
      return true;
    } catch (err) {
      // roll the optimistic removal back and resync with the server
      this.items.splice(index, 0, removed);
      this.events.onChange(this.items);
      if (err instanceof ApiError && (err.status === 404 || err.status === 409)) {
        // resync first so the error banner survives the reload's onChange
        await this.load();
        this.events.onError(`verdict rejected: ${err.message}`);
      } else {
        this.events.onError(err instanceof Error ? err.message : String(err));
      }
      return false;
    }
  }
}
