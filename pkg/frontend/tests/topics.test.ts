import { beforeEach, describe, expect, it } from "vitest";

import { buildTopicTable, renderTopics } from "../src/views/topics";
import { topicsSection } from "./fixtures";

describe("topic table", () => {
  let container: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<div id="plot"></div>';
    container = document.getElementById("plot")!;
  });

  it("builds one column per topic with its ranked terms", () => {
    const columns = buildTopicTable(topicsSection(), 4);
    expect(columns).toHaveLength(5);
    expect(columns.map((c) => c.label)).toEqual([
      "topic_1",
      "topic_2",
      "topic_3",
      "topic_4",
      "topic_5",
    ]);
    for (const column of columns) {
      expect(column.terms.length).toBeGreaterThan(0);
      expect(column.terms.length).toBeLessThanOrEqual(4);
    }
  });

  it("renders topics as columns and terms as rows", () => {
    renderTopics(container, topicsSection());
    const headers = [...container.querySelectorAll("th")].map((th) => th.textContent);
    expect(headers).toEqual(["topic_1", "topic_2", "topic_3", "topic_4", "topic_5"]);
    const firstRowCells = container.querySelectorAll("tbody tr:first-child td");
    expect(firstRowCells).toHaveLength(5);
  });

  it("shows an empty state without topics", () => {
    renderTopics(container, null);
    expect(container.querySelector(".empty-state")).not.toBeNull();
  });
});
