// Poll-based job lifecycle: 1 s interval, exponential backoff capped at
// 10 s. Resolves with the terminal payload (done or failed); the caller
// decides what failure looks like on screen.

import type { ApiClient, JobPayload } from "./api";

export interface PollOptions {
  initialMs?: number;
  maxMs?: number;
  onUpdate?: (payload: JobPayload) => void;
  sleep?: (ms: number) => Promise<void>;
}

const realSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

export function nextInterval(current: number, maxMs: number): number {
  return Math.min(current * 2, maxMs);
}

export async function pollJob(
  client: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobPayload> {
  const { initialMs = 1000, maxMs = 10000, onUpdate, sleep = realSleep } = options;
  let interval = initialMs;
  for (;;) {
    const payload = await client.getJob(jobId);
    onUpdate?.(payload);
    if (payload.status === "done" || payload.status === "failed") {
      return payload;
    }
    await sleep(interval);
    interval = nextInterval(interval, maxMs);
  }
}
