import { ApiClient } from "./api.js";
import { QueueController } from "./queue.js";
import { renderError, renderQueue, renderStats } from "./render.js";
import type { QueueItem, ThresholdConfig, Verdict } from "./types.js";

export function bootstrap(doc: Document, api: ApiClient = new ApiClient()): QueueController {
  const queueRoot = doc.getElementById("queue")!;
  const statsRoot = doc.getElementById("stats")!;
  const errorRoot = doc.getElementById("errors")!;
  const counter = doc.getElementById("counter")!;

  let thresholds: ThresholdConfig | null = null;

  const refreshStats = () =>
    api
      .fetchStats()
      .then((stats) => renderStats(doc, statsRoot, stats))
      .catch(() => undefined); // stats are informational; queue errors surface elsewhere

  const actions = {
    onVerdict(item: QueueItem, verdict: Verdict) {
      void controller.submit(item, verdict, "reviewer").then((ok) => {
        if (ok) void refreshStats();
      });
    },
  };

  const controller = new QueueController(api, {
    onChange(items) {
      renderError(doc, errorRoot, null, retry);
      counter.textContent = `${items.length} pair(s) awaiting review`;
      renderQueue(doc, queueRoot, items, thresholds, actions);
    },
    onError(message) {
      renderError(doc, errorRoot, message, retry);
    },
  });

  function retry(): void {
    renderError(doc, errorRoot, null, retry);
    void controller.load();
  }

  void api
    .fetchConfig()
    .then((cfg) => {
      thresholds = cfg;
    })
    .catch(() => undefined)
    .then(() => controller.load())
    .then(refreshStats);

  return controller;
}

if (typeof document !== "undefined" && document.getElementById("queue")) {
  bootstrap(document);
}
