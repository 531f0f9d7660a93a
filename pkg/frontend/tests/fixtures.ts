// Reference five-topic fixture: 15 terms whose topic memberships put
// the normalized term degrees on the exact grid {0.2, 0.4, 0.6, 0.8}.
// Degrees are exact fifths; closeness values are the engine's BFS
// results on this exact graph.

import type {
  SentimentSection,
  TopicnetSection,
  TopicsSection,
  TopTermsSection,
} from "../src/api";

export const FIVE_TOPIC_MEMBERSHIPS: Record<string, number[]> = {
  people: [0, 1, 2, 3],
  virus: [0, 2, 3, 4],
  health: [0, 1, 2],
  outbreak: [2, 3, 4],
  china: [0, 1, 4],
  public: [0, 1],
  uk: [1, 2],
  government: [2, 3],
  world: [3, 4],
  cases: [0, 4],
  wuhan: [0, 2],
  masks: [0],
  staff: [1],
  home: [2],
  patients: [3],
};

const CLOSENESS: Record<string, number> = {
  people: 0.5428571428571428,
  virus: 0.5135135135135135,
  health: 0.4634146341463415,
  outbreak: 0.4418604651162791,
  china: 0.4418604651162791,
  wuhan: 0.4222222222222222,
  uk: 0.40425531914893614,
  public: 0.3877551020408163,
  government: 0.3877551020408163,
  cases: 0.3877551020408163,
  world: 0.3584905660377358,
  masks: 0.34545454545454546,
  home: 0.34545454545454546,
  staff: 0.3220338983050847,
  patients: 0.3220338983050847,
};

export const K = 5;

export function topicLabel(k: number): string {
  return `topic_${k + 1}`;
}

export function fiveTopicTopicnetSection(): TopicnetSection {
  const terms = Object.keys(FIVE_TOPIC_MEMBERSHIPS).sort();
  const topics = Array.from({ length: K }, (_, k) => topicLabel(k));
  const edges: TopicnetSection["edges"] = [];
  for (const term of terms) {
    for (const k of FIVE_TOPIC_MEMBERSHIPS[term]) {
      edges.push({ topic: topicLabel(k), term, weight: 0.05 });
    }
  }
  const termsPerTopic = topics.map(
    (label) => edges.filter((e) => e.topic === label).length,
  );
  const centrality: TopicnetSection["centrality"] = [
    ...topics.map((label, k) => ({
      node: label,
      mode: "topic" as const,
      degree: termsPerTopic[k] / terms.length,
      closeness: 0.6, // display-only for topics in this fixture
    })),
    ...terms.map((term) => ({
      node: term,
      mode: "term" as const,
      degree: FIVE_TOPIC_MEMBERSHIPS[term].length / K,
      closeness: CLOSENESS[term],
    })),
  ];
  const bridges = terms
    .filter((t) => FIVE_TOPIC_MEMBERSHIPS[t].length >= 2)
    .sort(
      (a, b) =>
        FIVE_TOPIC_MEMBERSHIPS[b].length - FIVE_TOPIC_MEMBERSHIPS[a].length ||
        a.localeCompare(b),
    )
    .map((term) => ({
      term,
      topics: FIVE_TOPIC_MEMBERSHIPS[term].map(topicLabel),
    }));
  return { topics, terms, edges, centrality, bridges };
}

export function topTermsSection(): TopTermsSection {
  return {
    terms: [
      { term: "virus", total_count: 210, doc_count: 90 },
      { term: "people", total_count: 180, doc_count: 85 },
      { term: "outbreak", total_count: 120, doc_count: 60 },
      { term: "china", total_count: 96, doc_count: 48 },
      { term: "health", total_count: 80, doc_count: 44 },
      { term: "cases", total_count: 60, doc_count: 30 },
      { term: "masks", total_count: 30, doc_count: 18 },
    ],
  };
}

export function sentimentSection(): SentimentSection {
  const points = [];
  const spikes: Record<string, number> = {
    "2020-01-25": -6.0,
    "2020-02-15": -5.5,
    "2020-03-11": -7.0,
  };
  const start = new Date(Date.UTC(2020, 0, 20));
  for (let i = 0; i < 56; i++) {
    const day = new Date(start.getTime() + i * 86400000)
      .toISOString()
      .slice(0, 10);
    const mean = spikes[day] ?? -1.2;
    points.push({ date: day, mean, docs: 3, total: mean * 3 });
  }
  return { points, peaks: Object.keys(spikes).sort() };
}

export function topicsSection(): TopicsSection {
  const net = fiveTopicTopicnetSection();
  const topTerms: TopicsSection["top_terms"] = {};
  for (const label of net.topics) {
    topTerms[label] = net.edges
      .filter((e) => e.topic === label)
      .map((e) => ({ term: e.term, weight: e.weight }))
      .slice(0, 4);
  }
  return { topics: net.topics, top_terms: topTerms };
}
