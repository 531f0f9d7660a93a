// Wordcloud and frequency barplot. Font sizes are monotone in
// total_count; the cloud layout is a deterministic spiral seeded by the
// bundle's config hash. Changing the N slider re-slices the section the
// client already holds: no refetch.

import type { TopTermsSection } from "../api";
import { clear, el, emptyState, svg } from "../dom";
import { seededRng } from "../seeded";

export interface CloudWord {
  term: string;
  count: number;
  fontSize: number;
  x: number;
  y: number;
  rotate: boolean;
}

export interface Bar {
  term: string;
  count: number;
  width: number;
}

const MIN_FONT = 13;
const MAX_FONT = 46;

export function buildWordcloud(
  section: TopTermsSection,
  n: number,
  seed: string,
  width = 620,
  height = 420,
): CloudWord[] {
  const terms = section.terms.slice(0, n);
  if (terms.length === 0) return [];
  const counts = terms.map((t) => t.total_count);
  const max = Math.max(...counts);
  const min = Math.min(...counts);
  const rng = seededRng(seed);
  const centerX = width / 2;
  const centerY = height / 2;
  const angleOffset = rng() * 2 * Math.PI;
  return terms.map((row, index) => {
    const scale = max === min ? 1 : (row.total_count - min) / (max - min);
    // deterministic archimedean spiral: rank walks outward from center
    const angle = angleOffset + index * 2.39996; // golden angle
    const radius = 14 * Math.sqrt(index) + 6 * rng();
    return {
      term: row.term,
      count: row.total_count,
      fontSize: MIN_FONT + scale * (MAX_FONT - MIN_FONT),
      x: centerX + radius * Math.cos(angle) * 1.6,
      y: centerY + radius * Math.sin(angle),
      rotate: rng() < 0.15,
    };
  });
}

export function buildBarplot(section: TopTermsSection, n: number, width = 420): Bar[] {
  const terms = [...section.terms]
    .sort((a, b) => b.total_count - a.total_count || a.term.localeCompare(b.term))
    .slice(0, n);
  if (terms.length === 0) return [];
  const max = terms[0].total_count;
  return terms.map((row) => ({
    term: row.term,
    count: row.total_count,
    width: max === 0 ? 0 : (row.total_count / max) * width,
  }));
}

export function renderFrequencies(
  container: Element,
  section: TopTermsSection | null,
  options: { n: number; seed: string },
): void {
  clear(container);
  if (!section || section.terms.length === 0) {
    container.append(emptyState("No frequency data yet. Run an analysis."));
    return;
  }
  const words = buildWordcloud(section, options.n, options.seed);
  const cloud = svg("svg", {
    class: "wordcloud",
    viewBox: "0 0 620 420",
    width: 620,
    height: 420,
  });
  for (const word of words) {
    cloud.append(
      svg(
        "text",
        {
          class: "cloud-word",
          "data-term": word.term,
          "data-count": word.count,
          x: word.x.toFixed(1),
          y: word.y.toFixed(1),
          "font-size": word.fontSize.toFixed(1),
          "text-anchor": "middle",
          transform: word.rotate
            ? `rotate(90 ${word.x.toFixed(1)} ${word.y.toFixed(1)})`
            : null,
        },
        word.term,
      ),
    );
  }
  const bars = buildBarplot(section, options.n);
  const rowHeight = 22;
  const plot = svg("svg", {
    class: "barplot",
    viewBox: `0 0 560 ${bars.length * rowHeight + 10}`,
    width: 560,
    height: bars.length * rowHeight + 10,
  });
  bars.forEach((bar, i) => {
    const y = 5 + i * rowHeight;
    plot.append(
      svg("rect", {
        class: "bar",
        "data-term": bar.term,
        "data-count": bar.count,
        x: 120,
        y,
        width: Math.max(1, bar.width).toFixed(1),
        height: rowHeight - 6,
      }),
      svg(
        "text",
        { class: "bar-label", x: 114, y: y + rowHeight / 2, "text-anchor": "end" },
        bar.term,
      ),
      svg(
        "text",
        {
          class: "bar-count",
          x: 124 + Math.max(1, bar.width),
          y: y + rowHeight / 2,
        },
        String(bar.count),
      ),
    );
  });
  container.append(
    el("div", { class: "view-frequencies" }, cloud, plot),
  );
}
