// The dashboard shell against a fully mocked API serving the five-topic
// fixture bundle: submit, poll, render, and the bridge-term interaction.
// Every rendered number is traceable to a mocked section payload.

import { beforeEach, describe, expect, it } from "vitest";

import type { ApiClient, JobPayload, SectionName } from "../src/api";
import { ApiError } from "../src/api";
import { Dashboard } from "../src/main";
import {
  sentimentSection,
  fiveTopicTopicnetSection,
  FIVE_TOPIC_MEMBERSHIPS,
  topicLabel,
  topicsSection,
  topTermsSection,
} from "./fixtures";

class MockClient {
  sectionFetches: SectionName[] = [];
  submitted: unknown[] = [];
  failWith: { stage: string; detail: string } | null = null;
  offline = false;

  async corpora() {
    return { corpora: [{ corpus_id: "guardian", total: 42 }] };
  }

  async submitAnalysis(config: unknown) {
    if (this.offline) throw new ApiError(0, "fetch failed");
    this.submitted.push(config);
    return { job_id: "job-1", status: "queued" };
  }

  async getJob(jobId: string): Promise<JobPayload> {
    if (this.failWith) {
      return {
        job_id: jobId,
        status: "failed",
        stage: this.failWith.stage,
        created_at: "now",
        error: this.failWith,
      };
    }
    return {
      job_id: jobId,
      status: "done",
      stage: null,
      created_at: "now",
      bundle: {
        key: "bundle-1",
        config_hash: "hash-abcdef123456",
        sections: ["topterms", "sentiment", "coocnet", "topics", "topicnet"],
      },
    };
  }

  async getSection(_jobId: string, name: SectionName) {
    this.sectionFetches.push(name);
    switch (name) {
      case "topterms":
        return topTermsSection();
      case "sentiment":
        return sentimentSection();
      case "topics":
        return topicsSection();
      case "topicnet":
        return fiveTopicTopicnetSection();
      default:
        return { nodes: [], edges: [], centrality: [] };
    }
  }
}

async function settled() {
  // let queued microtasks (render chains) finish
  for (let i = 0; i < 5; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

describe("Dashboard", () => {
  let root: HTMLElement;
  let client: MockClient;
  let dashboard: Dashboard;

  beforeEach(async () => {
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app")!;
    client = new MockClient();
    dashboard = new Dashboard(root, client as unknown as ApiClient);
    await dashboard.start();
    await settled();
  });

  it("lays out menu bar, control panel, and plotting space", () => {
    expect(root.querySelectorAll(".tab")).toHaveLength(5);
    expect(root.querySelector(".control-panel")).not.toBeNull();
    expect(root.querySelector(".plot-space")).not.toBeNull();
    expect(root.querySelector(".empty-state")).not.toBeNull(); // nothing run yet
  });

  it("submit -> poll -> render shows the topics-terms fixture and outbreak interaction", async () => {
    // switch to the two-mode network tab
    root
      .querySelector<HTMLButtonElement>('.tab[data-tab="topicnet"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await dashboard.submit();
    await settled();

    expect(client.submitted).toHaveLength(1);
    expect(root.querySelectorAll(".topic-node")).toHaveLength(5);
    expect(root.querySelectorAll(".term-node")).toHaveLength(15);

    // exact degree-grid sizing straight from the mocked section
    const radius = (term: string) =>
      Number(
        root
          .querySelector(`.term-node[data-node="${term}"] circle`)!
          .getAttribute("r"),
      );
    expect(radius("people")).toBeCloseTo(0.8 * 30, 2);
    expect(radius("outbreak")).toBeCloseTo(0.6 * 30, 2);
    expect(radius("masks")).toBeCloseTo(0.2 * 30, 2);

    // clicking outbreak highlights exactly its three topics
    root
      .querySelector('.term-node[data-node="outbreak"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    const highlighted = [...root.querySelectorAll(".topic-node.highlight")].map(
      (n) => n.getAttribute("data-node"),
    );
    expect(highlighted.sort()).toEqual(
      FIVE_TOPIC_MEMBERSHIPS.outbreak.map(topicLabel).sort(),
    );

    // the config hash of the rendered bundle is on screen
    expect(
      root.querySelector('[data-role="config-hash"]')!.textContent,
    ).toContain("hash-abcdef1234".slice(0, 12));
  });

  it("renders the frequency views from the mocked section", async () => {
    await dashboard.submit();
    await settled();
    expect(root.querySelectorAll(".cloud-word").length).toBeGreaterThan(0);
    expect(client.sectionFetches).toContain("topterms");
  });

  it("moving the wordcloud slider re-renders without refetching", async () => {
    await dashboard.submit();
    await settled();
    const fetchesAfterRun = client.sectionFetches.length;
    const slider = root.querySelector<HTMLInputElement>('input[name="cloud_n"]')!;
    slider.value = "6";
    slider.dispatchEvent(new Event("input", { bubbles: true }));
    await settled();
    expect(root.querySelectorAll(".bar")).toHaveLength(6);
    expect(client.sectionFetches.length).toBe(fetchesAfterRun); // cache hit
  });

  it("greys the plot and warns when parameters drift from the bundle", async () => {
    await dashboard.submit();
    await settled();
    const kInput = root.querySelector<HTMLInputElement>('input[name="k"]')!;
    kInput.value = "7";
    kInput.dispatchEvent(new Event("change", { bubbles: true }));
    await settled();
    expect(root.querySelector(".plot")!.classList.contains("stale")).toBe(true);
    expect(root.querySelector(".banner.warn")?.textContent).toContain("stale");
  });

  it("surfaces failed jobs with their stage and message verbatim", async () => {
    client.failWith = { stage: "topicmodel", detail: "k=500 exceeds vocabulary size 12" };
    await dashboard.submit();
    await settled();
    const banner = root.querySelector(".banner.error");
    expect(banner?.textContent).toContain("topicmodel");
    expect(banner?.textContent).toContain("k=500 exceeds vocabulary size 12");
  });

  it("offers a retry when the API is unreachable", async () => {
    client.offline = true;
    await dashboard.submit();
    await settled();
    expect(root.querySelector(".banner.error")?.textContent).toContain(
      "unreachable",
    );
    expect(root.querySelector("button.retry")).not.toBeNull();
  });
});
