// Single source of truth for the UI. Parameter edits mark the state
// dirty; bundle sections are rendered only while the shown bundle still
// belongs to the parameters on screen.

export type MethodTab =
  | "frequencies"
  | "sentiment"
  | "coocnet"
  | "topics"
  | "topicnet";

export const METHOD_TABS: MethodTab[] = [
  "frequencies",
  "sentiment",
  "coocnet",
  "topics",
  "topicnet",
];

// the pipeline parameters the control panel exposes, nothing more
export interface PipelineParams {
  corpus_id: string;
  language: string;
  date_from: string | null;
  date_to: string | null;
  max_sparsity: number;
  cooc_mode: "binary" | "count";
  cooc_min_weight: number;
  k: number;
  alpha: number | null;
  iterations: number;
  burn_in: number;
  seed: number;
  top_n: number;
}

export function defaultParams(corpusId = ""): PipelineParams {
  return {
    corpus_id: corpusId,
    language: "en",
    date_from: null,
    date_to: null,
    max_sparsity: 0.99,
    cooc_mode: "binary",
    cooc_min_weight: 2,
    k: 5,
    alpha: null,
    iterations: 1000,
    burn_in: 200,
    seed: 42,
    top_n: 20,
  };
}

export interface ViewState {
  params: PipelineParams;
  tab: MethodTab;
  dirty: boolean;
  jobId: string | null;
  jobStatus: "idle" | "queued" | "running" | "done" | "failed";
  jobStage: string | null;
  bundleKey: string | null;
  configHash: string | null;
  error: { stage: string | null; detail: string } | null;
}

export function initialState(): ViewState {
  return {
    params: defaultParams(),
    tab: "frequencies",
    dirty: true, // nothing has been run yet
    jobId: null,
    jobStatus: "idle",
    jobStage: null,
    bundleKey: null,
    configHash: null,
    error: null,
  };
}

export function editParams(
  state: ViewState,
  patch: Partial<PipelineParams>,
): ViewState {
  return { ...state, params: { ...state.params, ...patch }, dirty: true };
}

export function switchTab(state: ViewState, tab: MethodTab): ViewState {
  return { ...state, tab };
}

export function jobSubmitted(state: ViewState, jobId: string): ViewState {
  return {
    ...state,
    jobId,
    jobStatus: "queued",
    jobStage: null,
    dirty: false, // the submitted job now reflects the panel
    error: null,
  };
}

export function jobProgress(
  state: ViewState,
  status: "queued" | "running",
  stage: string | null,
): ViewState {
  return { ...state, jobStatus: status, jobStage: stage };
}

export function jobFinished(
  state: ViewState,
  payload: {
    status: "done" | "failed";
    bundle?: { key: string; config_hash: string | null };
    error?: { stage: string; detail: string };
  },
): ViewState {
  if (payload.status === "done" && payload.bundle) {
    return {
      ...state,
      jobStatus: "done",
      jobStage: null,
      bundleKey: payload.bundle.key,
      configHash: payload.bundle.config_hash,
      error: null,
    };
  }
  return {
    ...state,
    jobStatus: "failed",
    jobStage: payload.error?.stage ?? null,
    error: payload.error ?? { stage: null, detail: "job failed" },
  };
}

// sections may be shown only when a finished bundle exists and the
// control panel has not drifted away from it
export function canRenderBundle(state: ViewState): boolean {
  return state.jobStatus === "done" && state.bundleKey !== null && !state.dirty;
}

// build the engine-side pipeline config from the panel parameters
export function toPipelineConfig(params: PipelineParams): Record<string, unknown> {
  const lda: Record<string, unknown> = {
    k: params.k,
    iterations: params.iterations,
    burn_in: params.burn_in,
    seed: params.seed,
  };
  if (params.alpha !== null) {
    lda.alpha = params.alpha;
  }
  return {
    corpus_id: params.corpus_id,
    languages: [params.language],
    date_from: params.date_from,
    date_to: params.date_to,
    preprocess: { language: params.language },
    max_sparsity: params.max_sparsity,
    cooc_mode: params.cooc_mode,
    cooc_min_weight: params.cooc_min_weight,
    lda,
    top_n: params.top_n,
  };
}
