// Full round trip against the real engine: spawn the Python service,
// ingest a fixture corpus over HTTP, submit an analysis, poll to
// completion, fetch sections, and render them. Skips (loudly) when the
// engine is not available where the frontend tests run.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { pollJob } from "../src/poll";
import { buildTopicNetView, renderTopicNet, type TopicNetView } from "../src/views/network";
import { renderSentiment } from "../src/views/sentiment";

const here = path.dirname(fileURLToPath(import.meta.url));
const engineSrc = path.resolve(here, "../../src");

function engineAvailable(): boolean {
  const probe = spawnSync("python3", ["-c", "import cometa"], {
    env: { ...process.env, PYTHONPATH: engineSrc },
  });
  return probe.status === 0;
}

function fixtureRecords(): string {
  const topics = [
    ["virus", "outbreak", "cases", "health"],
    ["markets", "economy", "travel", "government"],
  ];
  const lines: string[] = [];
  for (let i = 0; i < 14; i++) {
    const words = topics[i % 2];
    const body = Array.from({ length: 24 }, (_, j) => words[(i + j) % 4]).join(" ");
    const day = String(4 + (i % 10)).padStart(2, "0");
    lines.push(
      JSON.stringify({
        id: `live-${i}`,
        source: "the-guardian",
        language: "en",
        published_at: `2020-01-${day}`,
        title: `Coverage update ${words[0]}`,
        body: `${body} crisis hope`,
      }),
    );
  }
  return lines.join("\n");
}

const available = engineAvailable();

describe.skipIf(!available)("live service round trip", () => {
  let child: ChildProcess;
  let client: ApiClient;
  const port = 18000 + Math.floor(Math.random() * 10000);

  beforeAll(async () => {
    const dataDir = mkdtempSync(path.join(tmpdir(), "cometa-live-"));
    child = spawn(
      "python3",
      [
        "-m",
        "cometa.cli",
        "--data-dir",
        dataDir,
        "serve",
        "--bind",
        `127.0.0.1:${port}`,
      ],
      {
        env: { ...process.env, PYTHONPATH: engineSrc },
        stdio: ["ignore", "pipe", "pipe"],
      },
    );
    client = new ApiClient(`http://127.0.0.1:${port}`);
    const deadline = Date.now() + 30000;
    for (;;) {
      try {
        await client.health();
        break;
      } catch {
        if (Date.now() > deadline) {
          throw new Error("service did not come up in 30s");
        }
        await new Promise((resolve) => setTimeout(resolve, 250));
      }
    }
  }, 45000);

  afterAll(() => {
    child?.kill("SIGTERM");
  });

  it("ingests, analyzes, polls, fetches sections, and renders", async () => {
    const report = await client.ingest("live", fixtureRecords());
    expect(report.accepted).toBe(14);
    expect(report.rejected).toBe(0);

    const corpora = await client.corpora();
    expect(corpora.corpora.map((c) => c.corpus_id)).toContain("live");

    const { job_id } = await client.submitAnalysis({
      corpus_id: "live",
      preprocess: { language: "en" },
      max_sparsity: 1.0,
      cooc_min_weight: 1,
      lda: { k: 2, alpha: 0.5, iterations: 40, burn_in: 10, seed: 3 },
      top_n: 6,
    });
    expect(job_id).toBeTruthy();

    const stages: (string | null)[] = [];
    const payload = await pollJob(client, job_id, {
      initialMs: 100,
      maxMs: 400,
      onUpdate: (p) => stages.push(p.stage),
    });
    expect(payload.status).toBe("done");
    expect(payload.bundle?.key).toMatch(/^[0-9a-f]{64}$/);
    expect(payload.bundle?.config_hash).toMatch(/^[0-9a-f]{64}$/);

    const topicnet = await client.getSection<
      Parameters<typeof buildTopicNetView>[0]
    >(job_id, "topicnet");
    expect(topicnet.topics).toEqual(["topic_1", "topic_2"]);
    expect(topicnet.terms.length).toBeGreaterThan(0);

    const view = buildTopicNetView(topicnet) as TopicNetView;
    expect(view.oversized).toBe(false);
    expect(view.topics).toHaveLength(2);

    document.body.innerHTML = '<div id="plot"></div>';
    const container = document.getElementById("plot")!;
    renderTopicNet(container, topicnet);
    expect(container.querySelectorAll(".topic-node")).toHaveLength(2);
    expect(container.querySelectorAll(".term-node").length).toBe(
      topicnet.terms.length,
    );

    const sentiment = await client.getSection<
      Parameters<typeof renderSentiment>[1]
    >(job_id, "sentiment");
    renderSentiment(container, sentiment);
    expect(container.querySelectorAll(".sentiment-point").length).toBeGreaterThan(0);

    // a failed job round-trips its stage too
    const bad = await client.submitAnalysis({
      corpus_id: "live",
      preprocess: { language: "en" },
      max_sparsity: 1.0,
      lda: { k: 500, iterations: 10, burn_in: 0 },
    });
    const failed = await pollJob(client, bad.job_id, { initialMs: 100, maxMs: 400 });
    expect(failed.status).toBe("failed");
    expect(failed.error?.stage).toBe("topicmodel");
  }, 60000);
});

if (!available) {
  describe("live service round trip", () => {
    it.skip("python engine not importable next to the frontend; round trip skipped", () => {});
  });
}
