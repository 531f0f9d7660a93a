// Application shell: method menu on top, control panel on the left,
// plotting space on the right. The panel exposes exactly the pipeline
// parameters; submitting posts an analysis job, polls it, and renders
// the finished bundle's sections.

import {
  ApiClient,
  ApiError,
  type CoocSection,
  type SectionName,
  type SentimentSection,
  type TopicnetSection,
  type TopicsSection,
  type TopTermsSection,
} from "./api";
import { clear, el, emptyState } from "./dom";
import { pollJob } from "./poll";
import {
  canRenderBundle,
  editParams,
  initialState,
  jobFinished,
  jobProgress,
  jobSubmitted,
  METHOD_TABS,
  switchTab,
  toPipelineConfig,
  type MethodTab,
  type ViewState,
} from "./state";
import { renderFrequencies } from "./views/frequencies";
import { renderCoocNet, renderTopicNet } from "./views/network";
import { renderSentiment } from "./views/sentiment";
import { renderTopics } from "./views/topics";

const API_BASE =
  (import.meta as { env?: Record<string, string> }).env?.VITE_API_BASE ??
  "http://127.0.0.1:8787";

interface SectionCache {
  bundleKey: string;
  sections: Partial<Record<SectionName, unknown>>;
}

export class Dashboard {
  state: ViewState = initialState();
  private cache: SectionCache | null = null;
  private cloudN = 20;

  constructor(
    readonly root: HTMLElement,
    readonly client: ApiClient,
  ) {}

  async start(): Promise<void> {
    this.buildLayout();
    await this.refreshCorpora();
    this.renderAll();
  }

  private buildLayout(): void {
    clear(this.root);
    this.root.append(
      el(
        "header",
        { class: "menu-bar" },
        el("span", { class: "brand" }, "media coverage monitor"),
        el(
          "nav",
          { class: "tabs" },
          ...METHOD_TABS.map((tab) =>
            el("button", { class: "tab", "data-tab": tab, type: "button" }, tab),
          ),
        ),
        el("span", { class: "config-hash", "data-role": "config-hash" }, ""),
      ),
      el(
        "div",
        { class: "body" },
        el("aside", { class: "control-panel", "data-role": "panel" }),
        el(
          "main",
          { class: "plot-space" },
          el("div", { class: "status", "data-role": "status" }),
          el("div", { class: "plot", "data-role": "plot" }),
        ),
      ),
    );
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".tab")) {
      button.addEventListener("click", () => {
        this.state = switchTab(this.state, button.dataset.tab as MethodTab);
        this.renderAll();
      });
    }
    this.buildPanel();
  }

  private panelField(
    label: string,
    input: HTMLElement,
  ): HTMLElement {
    return el("label", { class: "field" }, el("span", {}, label), input);
  }

  private numberInput(
    name: string,
    value: number,
    step: string,
    onChange: (value: number) => void,
  ): HTMLInputElement {
    const input = el("input", {
      type: "number",
      name,
      value: String(value),
      step,
    });
    input.addEventListener("change", () => onChange(Number(input.value)));
    return input;
  }

  private buildPanel(): void {
    const panel = this.root.querySelector('[data-role="panel"]')!;
    clear(panel);
    const params = this.state.params;

    const corpusSelect = el("select", { name: "corpus" });
    corpusSelect.addEventListener("change", () => {
      this.edit({ corpus_id: (corpusSelect as HTMLSelectElement).value });
    });

    const dateFrom = el("input", { type: "date", name: "date_from" });
    dateFrom.addEventListener("change", () =>
      this.edit({ date_from: (dateFrom as HTMLInputElement).value || null }),
    );
    const dateTo = el("input", { type: "date", name: "date_to" });
    dateTo.addEventListener("change", () =>
      this.edit({ date_to: (dateTo as HTMLInputElement).value || null }),
    );

    const language = el("select", { name: "language" });
    for (const code of ["en", "it"]) {
      language.append(el("option", { value: code }, code));
    }
    language.addEventListener("change", () =>
      this.edit({ language: (language as HTMLSelectElement).value }),
    );

    const submit = el(
      "button",
      { class: "submit", type: "button", "data-role": "submit" },
      "run analysis",
    );
    submit.addEventListener("click", () => void this.submit());

    const cloudSlider = el("input", {
      type: "range",
      min: "5",
      max: "50",
      value: String(this.cloudN),
      name: "cloud_n",
    });
    cloudSlider.addEventListener("input", () => {
      // client-side reslice of the cached section: no refetch
      this.cloudN = Number((cloudSlider as HTMLInputElement).value);
      this.renderPlot();
    });

    panel.append(
      this.panelField("corpus", corpusSelect),
      this.panelField("language", language),
      this.panelField("from", dateFrom),
      this.panelField("to", dateTo),
      this.panelField(
        "max sparsity",
        this.numberInput("max_sparsity", params.max_sparsity, "0.01", (v) =>
          this.edit({ max_sparsity: v }),
        ),
      ),
      this.panelField(
        "min edge weight",
        this.numberInput("cooc_min_weight", params.cooc_min_weight, "1", (v) =>
          this.edit({ cooc_min_weight: v }),
        ),
      ),
      this.panelField(
        "topics (K)",
        this.numberInput("k", params.k, "1", (v) => this.edit({ k: v })),
      ),
      this.panelField(
        "iterations",
        this.numberInput("iterations", params.iterations, "50", (v) =>
          this.edit({ iterations: v }),
        ),
      ),
      this.panelField(
        "burn-in",
        this.numberInput("burn_in", params.burn_in, "50", (v) =>
          this.edit({ burn_in: v }),
        ),
      ),
      this.panelField(
        "seed",
        this.numberInput("seed", params.seed, "1", (v) => this.edit({ seed: v })),
      ),
      this.panelField(
        "top terms",
        this.numberInput("top_n", params.top_n, "1", (v) => this.edit({ top_n: v })),
      ),
      this.panelField("wordcloud N", cloudSlider),
      submit,
    );
  }

  private edit(patch: Parameters<typeof editParams>[1]): void {
    this.state = editParams(this.state, patch);
    this.renderStatus();
    this.renderPlot();
  }

  private async refreshCorpora(): Promise<void> {
    const select = this.root.querySelector<HTMLSelectElement>('select[name="corpus"]');
    if (!select) return;
    try {
      const { corpora } = await this.client.corpora();
      clear(select);
      for (const corpus of corpora) {
        select.append(
          el("option", { value: corpus.corpus_id }, `${corpus.corpus_id} (${corpus.total})`),
        );
      }
      if (corpora.length > 0 && !this.state.params.corpus_id) {
        this.state = editParams(this.state, { corpus_id: corpora[0].corpus_id });
      }
    } catch (err) {
      this.showError(err);
    }
  }

  async submit(): Promise<void> {
    if (!this.state.params.corpus_id) {
      this.showBanner("pick a corpus first", "warn");
      return;
    }
    try {
      const { job_id } = await this.client.submitAnalysis(
        toPipelineConfig(this.state.params),
      );
      this.state = jobSubmitted(this.state, job_id);
      this.renderStatus();
      const payload = await pollJob(this.client, job_id, {
        onUpdate: (update) => {
          if (update.status === "queued" || update.status === "running") {
            this.state = jobProgress(this.state, update.status, update.stage);
            this.renderStatus();
          }
        },
      });
      if (payload.status !== "done" && payload.status !== "failed") {
        return; // pollJob only resolves on terminal states
      }
      this.state = jobFinished(this.state, {
        status: payload.status,
        bundle: payload.bundle,
        error: payload.error,
      });
      if (payload.status === "done" && payload.bundle) {
        this.cache = { bundleKey: payload.bundle.key, sections: {} };
      }
      this.renderAll();
    } catch (err) {
      this.showError(err);
    }
  }

  private async section<T>(name: SectionName): Promise<T | null> {
    if (!canRenderBundle(this.state) || !this.state.jobId || !this.cache) {
      return null;
    }
    if (!(name in this.cache.sections)) {
      this.cache.sections[name] = await this.client.getSection(
        this.state.jobId,
        name,
      );
    }
    return this.cache.sections[name] as T;
  }

  private showBanner(message: string, kind: "warn" | "error"): void {
    const status = this.root.querySelector('[data-role="status"]')!;
    clear(status);
    status.append(el("div", { class: `banner ${kind}` }, message));
  }

  private showError(err: unknown): void {
    if (err instanceof ApiError && err.offline) {
      const status = this.root.querySelector('[data-role="status"]')!;
      clear(status);
      const retry = el("button", { type: "button", class: "retry" }, "retry");
      retry.addEventListener("click", () => void this.submit());
      status.append(
        el("div", { class: "banner error" }, "API unreachable. ", retry),
      );
      return;
    }
    if (err instanceof ApiError) {
      this.showBanner(
        err.stage ? `[${err.stage}] ${err.detail}` : err.detail,
        "error",
      );
      return;
    }
    this.showBanner(String(err), "error");
  }

  private renderStatus(): void {
    const status = this.root.querySelector('[data-role="status"]')!;
    clear(status);
    const hash = this.root.querySelector('[data-role="config-hash"]')!;
    hash.textContent = this.state.configHash
      ? `config ${this.state.configHash.slice(0, 12)}`
      : "";
    if (this.state.jobStatus === "failed" && this.state.error) {
      status.append(
        el(
          "div",
          { class: "banner error" },
          `job failed at ${this.state.error.stage ?? "?"}: ${this.state.error.detail}`,
        ),
      );
      return;
    }
    if (this.state.jobStatus === "queued" || this.state.jobStatus === "running") {
      status.append(
        el(
          "div",
          { class: "banner progress" },
          el("span", { class: "spinner" }),
          this.state.jobStage
            ? `running: ${this.state.jobStage}`
            : this.state.jobStatus,
        ),
      );
      return;
    }
    if (this.state.dirty && this.state.bundleKey) {
      status.append(
        el(
          "div",
          { class: "banner warn" },
          "parameters changed: results below are stale until you rerun",
        ),
      );
    }
  }

  private renderAll(): void {
    for (const button of this.root.querySelectorAll(".tab")) {
      button.classList.toggle(
        "active",
        button.getAttribute("data-tab") === this.state.tab,
      );
    }
    this.renderStatus();
    this.renderPlot();
  }

  private renderPlot(): void {
    const plot = this.root.querySelector<HTMLElement>('[data-role="plot"]')!;
    plot.classList.toggle("stale", this.state.dirty && this.state.bundleKey !== null);
    const seed = this.state.configHash ?? "unseeded";
    void this.renderTab(plot, seed);
  }

  private async renderTab(plot: HTMLElement, seed: string): Promise<void> {
    try {
      switch (this.state.tab) {
        case "frequencies": {
          const section = await this.section<TopTermsSection>("topterms");
          renderFrequencies(plot, section, { n: this.cloudN, seed });
          break;
        }
        case "sentiment": {
          const section = await this.section<SentimentSection>("sentiment");
          renderSentiment(plot, section);
          break;
        }
        case "coocnet": {
          const section = await this.section<CoocSection>("coocnet");
          renderCoocNet(plot, section);
          break;
        }
        case "topics": {
          const section = await this.section<TopicsSection>("topics");
          renderTopics(plot, section);
          break;
        }
        case "topicnet": {
          const section = await this.section<TopicnetSection>("topicnet");
          renderTopicNet(plot, section);
          break;
        }
      }
    } catch (err) {
      clear(plot);
      plot.append(emptyState("section unavailable"));
      this.showError(err);
    }
  }
}

export function mount(root: HTMLElement, baseUrl = API_BASE): Dashboard {
  const dashboard = new Dashboard(root, new ApiClient(baseUrl));
  void dashboard.start();
  return dashboard;
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    mount(root);
  }
}
