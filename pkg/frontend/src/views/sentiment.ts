// Polarity line plot over publication dates, with the engine's peak
// dates marked. Every tooltip echoes section data untouched.

import type { SentimentSection } from "../api";
import { clear, emptyState, svg } from "../dom";

export interface PlottedPoint {
  date: string;
  mean: number;
  docs: number;
  x: number;
  y: number;
  isPeak: boolean;
}

export interface SentimentView {
  points: PlottedPoint[];
  path: string | null; // null when a single dot is all there is
  zeroY: number;
}

export function buildSentimentView(
  section: SentimentSection,
  width = 640,
  height = 320,
): SentimentView {
  const { points, peaks } = section;
  const peakSet = new Set(peaks);
  const margin = 30;
  const means = points.map((p) => p.mean);
  const lo = Math.min(0, ...means);
  const hi = Math.max(0, ...means);
  const span = hi - lo || 1;
  const toY = (mean: number) =>
    margin + (hi - mean) / span * (height - 2 * margin);
  const toX = (index: number) =>
    points.length === 1
      ? width / 2
      : margin + (index / (points.length - 1)) * (width - 2 * margin);
  const plotted = points.map((p, i) => ({
    date: p.date,
    mean: p.mean,
    docs: p.docs,
    x: toX(i),
    y: toY(p.mean),
    isPeak: peakSet.has(p.date),
  }));
  const path =
    plotted.length < 2
      ? null
      : plotted
          .map((p, i) => `${i === 0 ? "M" : "L"}${p.x.toFixed(1)},${p.y.toFixed(1)}`)
          .join(" ");
  return { points: plotted, path, zeroY: toY(0) };
}

export function renderSentiment(
  container: Element,
  section: SentimentSection | null,
): void {
  clear(container);
  if (!section || section.points.length === 0) {
    container.append(emptyState("No sentiment series yet. Run an analysis."));
    return;
  }
  const view = buildSentimentView(section);
  const plot = svg("svg", {
    class: "sentiment-plot",
    viewBox: "0 0 640 320",
    width: 640,
    height: 320,
  });
  plot.append(
    svg("line", {
      class: "zero-axis",
      x1: 0,
      x2: 640,
      y1: view.zeroY.toFixed(1),
      y2: view.zeroY.toFixed(1),
    }),
  );
  if (view.path) {
    plot.append(svg("path", { class: "sentiment-line", d: view.path, fill: "none" }));
  }
  for (const point of view.points) {
    const dot = svg(
      "circle",
      {
        class: point.isPeak ? "sentiment-point peak-marker" : "sentiment-point",
        cx: point.x.toFixed(1),
        cy: point.y.toFixed(1),
        r: point.isPeak ? 6 : 3,
        "data-date": point.date,
        "data-mean": point.mean,
        "data-docs": point.docs,
      },
      svg("title", {}, `${point.date} mean=${point.mean} docs=${point.docs}`),
    );
    plot.append(dot);
  }
  container.append(plot);
}
