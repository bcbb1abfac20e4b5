import { describe, expect, it } from "vitest";

import { renderCorrelation } from "../src/render/correlation";
import { renderHeatmapOverlay, renderQuestionList } from "../src/render/overview";
import { renderTransitionPanel } from "../src/render/transitions";
import { nodeRadius, arcWidth } from "../src/scale";
import type {
  CorrelationResponse,
  HeatmapResponse,
  TransitionsResponse,
} from "../src/types";

function hslLightness(color: string): number {
  const match = /hsl\(\d+, \d+%, ([\d.]+)%\)/.exec(color);
  if (!match) throw new Error(`not an hsl color: ${color}`);
  return Number(match[1]);
}

const TRANSITIONS: TransitionsResponse = {
  cohort: "full",
  session_count: 42,
  rois: [0, 1, 2],
  edges: [
    { from: 0, to: 1, count: 40, mean_time: 0.3 },
    { from: 1, to: 2, count: 12, mean_time: 0.8 },
  ],
  roi_first_visit: { "0": 0.1, "1": 0.45, "2": 0.8 },
  ordering_score: 0.975,
  roi_details: [
    {
      roi_id: 0,
      centroid: [0.2, 0.5],
      bbox: [0.15, 0.45, 0.25, 0.55],
      event_count: 900,
      type_counts: { move: 900 },
      time_hist: [500, 250, 100, 40, 10],
    },
    {
      roi_id: 1,
      centroid: [0.5, 0.5],
      bbox: [0.45, 0.45, 0.55, 0.55],
      event_count: 100,
      type_counts: { move: 100 },
      time_hist: [10, 20, 40, 20, 10],
    },
    {
      roi_id: 2,
      centroid: [0.8, 0.5],
      bbox: [0.75, 0.45, 0.85, 0.55],
      event_count: 350,
      type_counts: { move: 350 },
      time_hist: [0, 10, 40, 100, 200],
    },
  ],
  params: {},
};

describe("transition panel", () => {
  it("pie sector colors darken strictly with the time bin", () => {
    const host = document.createElement("div");
    renderTransitionPanel(host, TRANSITIONS, "A");
    const node = host.querySelector('[data-roi-id="0"]')!;
    const sectors = [...node.querySelectorAll(".pie-sector")];
    expect(sectors.length).toBe(5);
    const lightness = sectors.map((s) => hslLightness(s.getAttribute("data-color")!));
    for (let i = 1; i < lightness.length; i++) {
      expect(lightness[i]!).toBeLessThan(lightness[i - 1]!);
    }
  });

  it("node radius ordering matches event count ordering", () => {
    const host = document.createElement("div");
    renderTransitionPanel(host, TRANSITIONS, "A");
    const nodes = [...host.querySelectorAll(".roi-node")].map((el) => ({
      count: Number(el.getAttribute("data-event-count")),
      radius: Number(el.getAttribute("data-radius")),
    }));
    const byCount = [...nodes].sort((a, b) => a.count - b.count);
    const byRadius = [...nodes].sort((a, b) => a.radius - b.radius);
    expect(byRadius).toEqual(byCount);
    // counts 100 < 350 < 900 must give strictly larger glyphs
    expect(byCount[0]!.radius).toBeLessThan(byCount[1]!.radius);
    expect(byCount[1]!.radius).toBeLessThan(byCount[2]!.radius);
  });

  it("arc color and width come from each edge's own fields", () => {
    const host = document.createElement("div");
    renderTransitionPanel(host, TRANSITIONS, "A");
    const arcs = [...host.querySelectorAll(".transition-arc")];
    expect(arcs.length).toBe(2);
    const early = arcs.find((a) => a.getAttribute("data-from") === "0")!;
    const late = arcs.find((a) => a.getAttribute("data-from") === "1")!;
    expect(hslLightness(late.getAttribute("stroke")!)).toBeLessThan(
      hslLightness(early.getAttribute("stroke")!),
    );
    expect(Number(late.getAttribute("stroke-width"))).toBeLessThan(
      Number(early.getAttribute("stroke-width")),
    );
  });

  it("displays session count and ordering score verbatim from the response", () => {
    const host = document.createElement("div");
    renderTransitionPanel(host, TRANSITIONS, "A");
    expect(host.querySelector(".session-count")!.textContent).toBe("42");
    expect(host.querySelector(".ordering-score")!.textContent).toBe("0.975");
    expect(host.querySelector(".cohort-label")!.textContent).toBe("full");
  });

  it("shows a placeholder when the map is empty", () => {
    const host = document.createElement("div");
    renderTransitionPanel(host, { ...TRANSITIONS, roi_details: [], edges: [], rois: [] }, "B");
    expect(host.querySelector(".placeholder")!.textContent).toBe("no transitions");
  });
});

describe("scales", () => {
  it("are strictly monotone for distinct inputs", () => {
    expect(nodeRadius(10, 100)).toBeLessThan(nodeRadius(100, 100));
    expect(arcWidth(1, 50)).toBeLessThan(arcWidth(50, 50));
  });
});

describe("question list", () => {
  const QUESTIONS = [
    { question_id: "q1", title: "Area", difficulty: 2, n_sessions: 60,
      mean_score_norm: 0.625 },
    { question_id: "q2", title: null, difficulty: 4, n_sessions: 0,
      mean_score_norm: null },
  ];

  it("renders one row per question with API numbers verbatim", () => {
    const host = document.createElement("div");
    renderQuestionList(host, QUESTIONS, "q1", () => undefined);
    const rows = [...host.querySelectorAll("tbody tr")];
    expect(rows.length).toBe(2);
    const cells = [...rows[0]!.querySelectorAll("td")].map((td) => td.textContent);
    expect(cells).toEqual(["q1 — Area", "2", "60", "0.625"]);
    expect(rows[0]!.classList.contains("selected")).toBe(true);
    expect([...rows[1]!.querySelectorAll("td")].map((td) => td.textContent))
      .toEqual(["q2", "4", "0", "–"]);
  });

  it("clicking a row reports that question id", () => {
    const host = document.createElement("div");
    let selected: string | null = null;
    renderQuestionList(host, QUESTIONS, null, (id) => (selected = id));
    (host.querySelectorAll("tbody tr")[1] as HTMLElement).click();
    expect(selected).toBe("q2");
  });

  it("shows an empty state for a dataset with no questions", () => {
    const host = document.createElement("div");
    renderQuestionList(host, [], null, () => undefined);
    expect(host.querySelector(".placeholder")).not.toBeNull();
  });
});

describe("heatmap overlay", () => {
  it("tags the canvas with the response's total mass", () => {
    const canvas = document.createElement("canvas");
    const data: HeatmapResponse = {
      width: 2,
      height: 2,
      sigma: 0,
      cells: [0, 1, 2, 3],
      total_mass: 6,
      params: { question_id: "q1", res: 2, sigma: 0, cohort: "all" },
    };
    renderHeatmapOverlay(canvas, data);
    expect(canvas.dataset.totalMass).toBe("6");
    expect(canvas.width).toBe(2);
  });
});

describe("correlation view", () => {
  const REPORT: CorrelationResponse = {
    pearson_r: -0.913,
    spearman_rho: -0.878,
    k_sigma: 2,
    intercept: 0.95,
    slope: -0.1,
    residual_sigma: 0.05,
    per_question: [
      { question_id: "q1", difficulty: 1, n_sessions: 5, mean_score_norm: 0.85,
        residual: 0.0, flagged: false },
      { question_id: "q2", difficulty: 3, n_sessions: 5, mean_score_norm: 0.65,
        residual: 0.0, flagged: false },
      { question_id: "q3", difficulty: 5, n_sessions: 5, mean_score_norm: 0.8,
        residual: 0.35, flagged: true },
    ],
    flagged: [{ question_id: "q3", residual: 0.35, direction: "easier_than_labeled" }],
    unscored: [],
  };

  it("highlights exactly the flagged points", () => {
    const host = document.createElement("div");
    renderCorrelation(host, REPORT, () => undefined);
    const flagged = [...host.querySelectorAll(".scatter-point.flagged")];
    expect(flagged.length).toBe(1);
    expect(flagged[0]!.getAttribute("data-question-id")).toBe("q3");
    expect(host.querySelector(".pearson")!.textContent).toBe("-0.913");
    expect(host.querySelector(".spearman")!.textContent).toBe("-0.878");
  });

  it("clicking a point selects its question", () => {
    const host = document.createElement("div");
    let selected: string | null = null;
    renderCorrelation(host, REPORT, (id) => (selected = id));
    const q2 = host.querySelector('[data-question-id="q2"]') as SVGElement;
    q2.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(selected).toBe("q2");
  });
});
