// Typed client for the analysis engine's HTTP API. The dashboard never
// computes analytics itself: every number it renders comes from one of
// these payloads.

export interface TermFrequencyRow {
  term: string;
  total_count: number;
  doc_count: number;
}

export interface TopTermsSection {
  terms: TermFrequencyRow[];
}

export interface SentimentPointRow {
  date: string;
  mean: number;
  docs: number;
  total: number;
}

export interface SentimentSection {
  points: SentimentPointRow[];
  peaks: string[];
}

export interface CoocSection {
  nodes: string[];
  edges: { source: string; target: string; weight: number }[];
  centrality: { node: string; degree: number; closeness: number }[];
}

export interface TopicsSection {
  topics: string[];
  top_terms: Record<string, { term: string; weight: number }[]>;
}

export interface TopicnetSection {
  topics: string[];
  terms: string[];
  edges: { topic: string; term: string; weight: number }[];
  centrality: {
    node: string;
    mode: "topic" | "term";
    degree: number;
    closeness: number;
  }[];
  bridges: { term: string; topics: string[] }[];
}

export type SectionName =
  | "topterms"
  | "sentiment"
  | "coocnet"
  | "topics"
  | "topicnet";

export interface JobBundleRef {
  key: string;
  config_hash: string | null;
  sections: SectionName[];
}

export interface JobPayload {
  job_id: string;
  status: "queued" | "running" | "done" | "failed";
  stage: string | null;
  created_at: string;
  bundle?: JobBundleRef;
  error?: { stage: string; detail: string };
}

export interface CorpusSummary {
  corpus_id: string;
  total: number;
}

export interface CorpusStats {
  total: number;
  by_language: Record<string, number>;
  by_source: Record<string, number>;
  date_range: [string, string] | null;
}

export class ApiError extends Error {
  readonly status: number; // 0 means the network itself failed
  readonly detail: string;
  readonly stage: string | null;

  constructor(status: number, detail: string, stage: string | null = null) {
    super(status === 0 ? `network error: ${detail}` : `HTTP ${status}: ${detail}`);
    this.status = status;
    this.detail = detail;
    this.stage = stage;
  }

  get offline(): boolean {
    return this.status === 0;
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, err instanceof Error ? err.message : String(err));
    }
    const text = await response.text();
    let body: unknown = null;
    try {
      body = text ? JSON.parse(text) : null;
    } catch {
      body = null;
    }
    if (!response.ok) {
      const problem = (body ?? {}) as {
        detail?: string;
        title?: string;
        stage?: string;
      };
      throw new ApiError(
        response.status,
        problem.detail ?? problem.title ?? text,
        problem.stage ?? null,
      );
    }
    return body as T;
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request("/health");
  }

  corpora(): Promise<{ corpora: CorpusSummary[] }> {
    return this.request("/corpora");
  }

  corpusStats(corpusId: string): Promise<CorpusStats> {
    return this.request(`/corpora/${encodeURIComponent(corpusId)}/stats`);
  }

  ingest(
    corpusId: string,
    jsonLines: string,
  ): Promise<{ accepted: number; rejected: number }> {
    return this.request(`/corpora/${encodeURIComponent(corpusId)}/documents`, {
      method: "POST",
      body: jsonLines,
      headers: { "content-type": "application/x-ndjson" },
    });
  }

  submitAnalysis(config: unknown): Promise<{ job_id: string; status: string }> {
    return this.request("/analyses", {
      method: "POST",
      body: JSON.stringify(config),
      headers: { "content-type": "application/json" },
    });
  }

  getJob(jobId: string): Promise<JobPayload> {
    return this.request(`/analyses/${encodeURIComponent(jobId)}`);
  }

  getSection<T>(jobId: string, name: SectionName): Promise<T> {
    return this.request(
      `/analyses/${encodeURIComponent(jobId)}/sections/${name}`,
    );
  }
}
