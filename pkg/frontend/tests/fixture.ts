import type { FetchLike } from "../src/api.js";
import type { QueueItem, ReviewStatus, ScoreBreakdown } from "../src/types.js";

export function breakdown(partial: Partial<ScoreBreakdown> = {}): ScoreBreakdown {
  return {
    tos: 0.5,
    sos: 0.5,
    tes: 0.5,
    ses: 0.5,
    ttes: 0.5,
    aes: 0.5,
    wss: 0.5,
    ts: 0.5,
    blocks: [],
    ...partial,
  };
}

export function item(idA: string, idB: string, partial: Partial<QueueItem> = {}): QueueItem {
  return {
    id_a: idA,
    id_b: idB,
    status: "scored",
    is_duplicate: true,
    breakdown: breakdown(),
    review: "unreviewed",
    title_a: `title ${idA}`,
    title_b: `title ${idB}`,
    text_a: `description of ${idA}`,
    text_b: `description of ${idB}`,
    skill_text_a: "python sql",
    skill_text_b: "python sql",
    ...partial,
  };
}

export interface FixtureServer {
  fetchImpl: FetchLike;
  items: QueueItem[];
  reviews: { id_a: string; id_b: string; verdict: string; reviewer: string }[];
  /** When set, POST /review/* answers with this status and error body once. */
  failNextReview: { status: number; error: string } | null;
}

/**
 * In-memory stand-in for the dedup service, speaking the same routes and
 * error shape over an injected fetch. Queue pages come back in pair-id
 * order, so client-side ts ordering is actually exercised.
 */
export function makeFixtureServer(items: QueueItem[]): FixtureServer {
  const server: FixtureServer = { items, reviews: [], failNextReview: null, fetchImpl: null! };

  const json = (body: unknown, status = 200) =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  server.fetchImpl = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, "http://fixture");
    if (url.pathname === "/review/queue") {
      const offset = Number(url.searchParams.get("offset") ?? 0);
      const limit = Number(url.searchParams.get("limit") ?? 20);
      const pending = server.items
        .filter((x) => x.is_duplicate && x.review === "unreviewed")
        .sort((x, y) => (x.id_a + x.id_b < y.id_a + y.id_b ? -1 : 1));
      return json({
        total: pending.length,
        offset,
        limit,
        items: pending.slice(offset, offset + limit),
      });
    }
    const review = url.pathname.match(/^\/review\/([^/]+)\/([^/]+)$/);
    if (review && init?.method === "POST") {
      if (server.failNextReview) {
        const fail = server.failNextReview;
        server.failNextReview = null;
        return json({ error: fail.error }, fail.status);
      }
      const body = JSON.parse(String(init.body)) as { verdict: string; reviewer: string };
      if (body.verdict !== "confirmed" && body.verdict !== "rejected") {
        return json({ error: `invalid verdict: ${body.verdict}` }, 400);
      }
      const target = server.items.find((x) => x.id_a === review[1] && x.id_b === review[2]);
      if (!target) return json({ error: "unknown pair" }, 404);
      if (!target.is_duplicate) return json({ error: "pair was not flagged as duplicate" }, 409);
      target.review = body.verdict as ReviewStatus;
      server.reviews.push({
        id_a: review[1],
        id_b: review[2],
        verdict: body.verdict,
        reviewer: body.reviewer,
      });
      return json(target);
    }
    if (url.pathname === "/stats") {
      return json({
        postings: server.items.length * 2,
        comparisons: server.items.length,
        duplicates: server.items.filter((x) => x.is_duplicate).length,
        groups: 1,
        mean_group_size: 2,
        unique_postings: server.items.length,
      });
    }
    if (url.pathname === "/config") {
      return json({
        mode: "production",
        ts_threshold: 0.6,
        component_floor: 0.1,
        window_days: 42,
      });
    }
    return json({ error: `no route for ${url.pathname}` }, 404);
  };

  return server;
}
