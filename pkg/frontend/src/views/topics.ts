// Topic table: topics as columns, top terms as rows (the familiar
// published-table shape), shown alongside the two-mode network.

import type { TopicsSection } from "../api";
import { clear, el, emptyState } from "../dom";

export interface TopicColumn {
  label: string;
  terms: string[];
}

export function buildTopicTable(section: TopicsSection, maxRows = 20): TopicColumn[] {
  return section.topics.map((label) => ({
    label,
    terms: (section.top_terms[label] ?? []).slice(0, maxRows).map((e) => e.term),
  }));
}

export function renderTopics(
  container: Element,
  section: TopicsSection | null,
  options: { maxRows?: number } = {},
): void {
  clear(container);
  if (!section || section.topics.length === 0) {
    container.append(emptyState("No topics yet. Run an analysis."));
    return;
  }
  const columns = buildTopicTable(section, options.maxRows ?? 20);
  const depth = Math.max(...columns.map((c) => c.terms.length));
  const head = el(
    "tr",
    {},
    ...columns.map((c) => el("th", { "data-topic": c.label }, c.label)),
  );
  const body: HTMLElement[] = [];
  for (let row = 0; row < depth; row++) {
    body.push(
      el(
        "tr",
        {},
        ...columns.map((c) =>
          el("td", { "data-topic": c.label }, c.terms[row] ?? ""),
        ),
      ),
    );
  }
  container.append(
    el(
      "table",
      { class: "topic-table" },
      el("thead", {}, head),
      el("tbody", {}, ...body),
    ),
  );
}
