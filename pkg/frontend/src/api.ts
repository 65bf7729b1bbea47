import type { QueueItem, QueuePage, Stats, ThresholdConfig, Verdict } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin client over the dedup service; fetch is injectable for tests. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const message =
        typeof body === "object" && body !== null && "error" in body
          ? String((body as { error: unknown }).error)
          : `request failed with status ${response.status}`;
      throw new ApiError(response.status, message);
    }
    return body as T;
  }

  fetchQueue(offset = 0, limit = 50): Promise<QueuePage> {
    return this.request<QueuePage>(
      `/review/queue?status=unreviewed&offset=${offset}&limit=${limit}`,
    );
  }

  submitVerdict(idA: string, idB: string, verdict: Verdict, reviewer: string): Promise<QueueItem> {
    return this.request<QueueItem>(
      `/review/${encodeURIComponent(idA)}/${encodeURIComponent(idB)}`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ verdict, reviewer }),
      },
    );
  }

  fetchStats(): Promise<Stats> {
    return this.request<Stats>("/stats");
  }

  fetchConfig(): Promise<ThresholdConfig> {
    return this.request<ThresholdConfig>("/config");
  }
}
