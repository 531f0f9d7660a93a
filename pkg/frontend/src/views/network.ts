// Interactive network views. The two-mode layout rings terms around the
// topic nodes; node size is proportional to the engine's normalized
// degree, and selecting a term lights up its incident topics (the
// bridge-term exploration). Oversized graphs short-circuit into a prompt
// to tighten the filters instead of drawing a hairball.

import type { CoocSection, TopicnetSection } from "../api";
import { clear, emptyState, svg } from "../dom";

export const DEFAULT_NODE_CAP = 220;

export interface PlacedNode {
  id: string;
  mode: "topic" | "term";
  degree: number;
  x: number;
  y: number;
  r: number;
}

export interface TopicNetView {
  oversized: false;
  topics: PlacedNode[];
  terms: PlacedNode[];
  edges: { topic: string; term: string }[];
  incidentTopics: Map<string, string[]>;
}

export interface OversizedView {
  oversized: true;
  nodeCount: number;
  cap: number;
}

const TERM_RADIUS_SCALE = 30; // radius = degree * scale: exact grid sizing

export function buildTopicNetView(
  section: TopicnetSection,
  options: { nodeCap?: number; width?: number; height?: number } = {},
): TopicNetView | OversizedView {
  const { nodeCap = DEFAULT_NODE_CAP, width = 680, height = 680 } = options;
  const nodeCount = section.topics.length + section.terms.length;
  if (nodeCount > nodeCap) {
    return { oversized: true, nodeCount, cap: nodeCap };
  }
  const degreeOf = new Map(
    section.centrality.map((row) => [`${row.mode}:${row.node}`, row.degree]),
  );
  const cx = width / 2;
  const cy = height / 2;
  const innerR = Math.min(width, height) * 0.18;
  const outerR = Math.min(width, height) * 0.42;

  const topics = [...section.topics].sort().map((label, i, all) => {
    const angle = (2 * Math.PI * i) / all.length - Math.PI / 2;
    return {
      id: label,
      mode: "topic" as const,
      degree: degreeOf.get(`topic:${label}`) ?? 0,
      x: cx + innerR * Math.cos(angle),
      y: cy + innerR * Math.sin(angle),
      r: 14 + (degreeOf.get(`topic:${label}`) ?? 0) * 10,
    };
  });
  const terms = [...section.terms].sort().map((term, i, all) => {
    const angle = (2 * Math.PI * i) / all.length - Math.PI / 2;
    const degree = degreeOf.get(`term:${term}`) ?? 0;
    return {
      id: term,
      mode: "term" as const,
      degree,
      x: cx + outerR * Math.cos(angle),
      y: cy + outerR * Math.sin(angle),
      r: degree * TERM_RADIUS_SCALE,
    };
  });
  const incidentTopics = new Map<string, string[]>();
  for (const edge of section.edges) {
    const list = incidentTopics.get(edge.term) ?? [];
    list.push(edge.topic);
    incidentTopics.set(edge.term, list);
  }
  return {
    oversized: false,
    topics,
    terms,
    edges: section.edges.map((e) => ({ topic: e.topic, term: e.term })),
    incidentTopics,
  };
}

export function selectTerm(view: TopicNetView, term: string): string[] {
  return [...(view.incidentTopics.get(term) ?? [])].sort();
}

export function renderTopicNet(
  container: Element,
  section: TopicnetSection | null,
  options: { nodeCap?: number } = {},
): void {
  clear(container);
  if (!section || section.topics.length === 0) {
    container.append(emptyState("No topic network yet. Run an analysis."));
    return;
  }
  const view = buildTopicNetView(section, options);
  if (view.oversized) {
    container.append(
      emptyState(
        `Graph has ${view.nodeCount} nodes (cap ${view.cap}). ` +
          "Raise the minimum edge weight or lower top-N and rerun.",
      ),
    );
    return;
  }
  const plot = svg("svg", {
    class: "topicnet-plot",
    viewBox: "0 0 680 680",
    width: 680,
    height: 680,
  });
  const nodeIndex = new Map<string, PlacedNode>();
  for (const node of [...view.topics, ...view.terms]) {
    nodeIndex.set(`${node.mode}:${node.id}`, node);
  }
  for (const edge of view.edges) {
    const a = nodeIndex.get(`topic:${edge.topic}`);
    const b = nodeIndex.get(`term:${edge.term}`);
    if (!a || !b) continue;
    plot.append(
      svg("line", {
        class: "net-edge",
        "data-topic": edge.topic,
        "data-term": edge.term,
        x1: a.x.toFixed(1),
        y1: a.y.toFixed(1),
        x2: b.x.toFixed(1),
        y2: b.y.toFixed(1),
      }),
    );
  }
  for (const topic of view.topics) {
    plot.append(
      svg(
        "g",
        { class: "node topic-node", "data-node": topic.id },
        svg("rect", {
          x: (topic.x - topic.r).toFixed(1),
          y: (topic.y - topic.r * 0.6).toFixed(1),
          width: (topic.r * 2).toFixed(1),
          height: (topic.r * 1.2).toFixed(1),
          rx: 4,
        }),
        svg(
          "text",
          { x: topic.x.toFixed(1), y: topic.y.toFixed(1), "text-anchor": "middle" },
          topic.id,
        ),
      ),
    );
  }
  for (const term of view.terms) {
    const group = svg(
      "g",
      {
        class: "node term-node",
        "data-node": term.id,
        "data-degree": term.degree,
      },
      svg("circle", {
        cx: term.x.toFixed(1),
        cy: term.y.toFixed(1),
        r: term.r.toFixed(2),
      }),
      svg(
        "text",
        {
          x: term.x.toFixed(1),
          y: (term.y - term.r - 4).toFixed(1),
          "text-anchor": "middle",
        },
        term.id,
      ),
    );
    group.addEventListener("click", () => {
      const highlighted = selectTerm(view, term.id);
      for (const node of plot.querySelectorAll(".topic-node")) {
        const id = node.getAttribute("data-node") ?? "";
        node.classList.toggle("highlight", highlighted.includes(id));
      }
      for (const node of plot.querySelectorAll(".term-node")) {
        node.classList.toggle(
          "selected",
          node.getAttribute("data-node") === term.id,
        );
      }
    });
    plot.append(group);
  }
  container.append(plot);
}

// one-mode co-occurrence view: a single ring, sized by degree
export function renderCoocNet(
  container: Element,
  section: CoocSection | null,
  options: { nodeCap?: number } = {},
): void {
  clear(container);
  if (!section || section.nodes.length === 0) {
    container.append(emptyState("No co-occurrence network yet. Run an analysis."));
    return;
  }
  const cap = options.nodeCap ?? DEFAULT_NODE_CAP;
  if (section.nodes.length > cap) {
    container.append(
      emptyState(
        `Graph has ${section.nodes.length} nodes (cap ${cap}). ` +
          "Raise the minimum edge weight or the sparsity cut and rerun.",
      ),
    );
    return;
  }
  const degreeOf = new Map(section.centrality.map((r) => [r.node, r.degree]));
  const width = 680;
  const cx = width / 2;
  const ringR = width * 0.42;
  const placed = new Map<string, { x: number; y: number }>();
  const nodes = [...section.nodes].sort();
  nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / nodes.length - Math.PI / 2;
    placed.set(node, {
      x: cx + ringR * Math.cos(angle),
      y: cx + ringR * Math.sin(angle),
    });
  });
  const plot = svg("svg", {
    class: "coocnet-plot",
    viewBox: `0 0 ${width} ${width}`,
    width,
    height: width,
  });
  for (const edge of section.edges) {
    const a = placed.get(edge.source);
    const b = placed.get(edge.target);
    if (!a || !b) continue;
    plot.append(
      svg("line", {
        class: "net-edge",
        x1: a.x.toFixed(1),
        y1: a.y.toFixed(1),
        x2: b.x.toFixed(1),
        y2: b.y.toFixed(1),
        "data-weight": edge.weight,
      }),
    );
  }
  for (const node of nodes) {
    const spot = placed.get(node)!;
    const degree = degreeOf.get(node) ?? 0;
    plot.append(
      svg(
        "g",
        { class: "node cooc-node", "data-node": node, "data-degree": degree },
        svg("circle", {
          cx: spot.x.toFixed(1),
          cy: spot.y.toFixed(1),
          r: (3 + degree * 22).toFixed(2),
        }),
        svg(
          "text",
          { x: spot.x.toFixed(1), y: (spot.y - 8).toFixed(1), "text-anchor": "middle" },
          node,
        ),
      ),
    );
  }
  container.append(plot);
}
