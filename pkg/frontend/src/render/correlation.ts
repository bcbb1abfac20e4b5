// Difficulty-vs-score scatter with flagged questions highlighted; clicking
// a point selects that question in the overview.

import type { CorrelationResponse } from "../types";

const SVG_NS = "http://www.w3.org/2000/svg";
export const PLOT_W = 460;
export const PLOT_H = 300;
const PAD = 36;

export function renderCorrelation(
  container: HTMLElement,
  data: CorrelationResponse,
  onSelect: (questionId: string) => void,
): void {
  container.replaceChildren();

  const summary = document.createElement("div");
  summary.className = "correlation-summary";
  const pearson = document.createElement("span");
  pearson.className = "pearson";
  pearson.textContent = data.pearson_r.toFixed(3);
  const spearman = document.createElement("span");
  spearman.className = "spearman";
  spearman.textContent = data.spearman_rho.toFixed(3);
  summary.append("pearson r = ", pearson, " · spearman ρ = ", spearman,
                 ` · flag threshold ${data.k_sigma}σ`);
  container.appendChild(summary);

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${PLOT_W} ${PLOT_H}`);
  svg.setAttribute("width", String(PLOT_W));
  svg.setAttribute("height", String(PLOT_H));
  svg.setAttribute("class", "correlation-svg");

  const difficulties = data.per_question.map((q) => q.difficulty);
  const dMin = Math.min(...difficulties);
  const dMax = Math.max(...difficulties);
  const spanD = dMax - dMin || 1;
  const sx = (d: number) => PAD + ((d - dMin) / spanD) * (PLOT_W - 2 * PAD);
  const sy = (score: number) => PLOT_H - PAD - score * (PLOT_H - 2 * PAD);

  const axis = document.createElementNS(SVG_NS, "path");
  axis.setAttribute(
    "d",
    `M ${PAD} ${PAD} L ${PAD} ${PLOT_H - PAD} L ${PLOT_W - PAD} ${PLOT_H - PAD}`,
  );
  axis.setAttribute("fill", "none");
  axis.setAttribute("stroke", "#999");
  svg.appendChild(axis);

  // fitted trend from the API's intercept/slope, drawn across the label span
  const trend = document.createElementNS(SVG_NS, "line");
  trend.setAttribute("x1", String(sx(dMin)));
  trend.setAttribute("y1", String(sy(data.intercept + data.slope * dMin)));
  trend.setAttribute("x2", String(sx(dMax)));
  trend.setAttribute("y2", String(sy(data.intercept + data.slope * dMax)));
  trend.setAttribute("stroke", "#bbb");
  trend.setAttribute("stroke-dasharray", "4 3");
  trend.setAttribute("class", "trend-line");
  svg.appendChild(trend);

  for (const q of data.per_question) {
    const point = document.createElementNS(SVG_NS, "circle");
    point.setAttribute("cx", String(sx(q.difficulty)));
    point.setAttribute("cy", String(sy(q.mean_score_norm)));
    point.setAttribute("r", q.flagged ? "7" : "4");
    point.setAttribute("class", q.flagged ? "scatter-point flagged" : "scatter-point");
    point.setAttribute("fill", q.flagged ? "#d64523" : "#3a6ea5");
    point.setAttribute("data-question-id", q.question_id);
    point.setAttribute("data-mean-score", String(q.mean_score_norm));
    point.setAttribute("data-difficulty", String(q.difficulty));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent =
      `${q.question_id}: difficulty ${q.difficulty}, mean ${q.mean_score_norm.toFixed(3)}, ` +
      `residual ${q.residual.toFixed(3)}${q.flagged ? " (flagged)" : ""}`;
    point.appendChild(title);
    point.addEventListener("click", () => onSelect(q.question_id));
    svg.appendChild(point);
  }
  container.appendChild(svg);

  if (data.flagged.length > 0) {
    const list = document.createElement("ul");
    list.className = "flagged-list";
    for (const f of data.flagged) {
      const item = document.createElement("li");
      item.dataset.questionId = f.question_id;
      const residual = document.createElement("span");
      residual.className = "residual";
      residual.textContent = f.residual.toFixed(3);
      item.append(`${f.question_id}: ${f.direction.replace(/_/g, " ")} (residual `,
                  residual, ")");
      item.addEventListener("click", () => onSelect(f.question_id));
      list.appendChild(item);
    }
    container.appendChild(list);
  }
}

export function renderCorrelationError(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const note = document.createElement("p");
  note.className = "placeholder";
  note.textContent = message;
  container.appendChild(note);
}
