// Overview: the question list and the selected question's heat map as a
// color overlay (alpha tracks intensity) above an optional background.

import { heatGridToRgba } from "../color";
import type { HeatmapResponse, QuestionSummary } from "../types";

export function renderQuestionList(
  container: HTMLElement,
  questions: QuestionSummary[],
  selectedId: string | null,
  onSelect: (questionId: string) => void,
): void {
  container.replaceChildren();
  if (questions.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no questions in the loaded dataset";
    container.appendChild(empty);
    return;
  }
  const table = document.createElement("table");
  table.className = "question-table";
  table.innerHTML =
    "<thead><tr><th>question</th><th>difficulty</th><th>sessions</th>" +
    "<th>mean score</th></tr></thead>";
  const body = document.createElement("tbody");
  for (const q of questions) {
    const row = document.createElement("tr");
    row.dataset.questionId = q.question_id;
    row.className = q.question_id === selectedId ? "selected" : "";
    const cells = [
      q.title ? `${q.question_id} — ${q.title}` : q.question_id,
      String(q.difficulty),
      String(q.n_sessions),
      q.mean_score_norm === null ? "–" : q.mean_score_norm.toFixed(3),
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      row.appendChild(td);
    }
    row.addEventListener("click", () => onSelect(q.question_id));
    body.appendChild(row);
  }
  table.appendChild(body);
  container.appendChild(table);
}

/**
 * Paint the heat grid into the overlay canvas. The peak cell saturates
 * fully; empty cells stay transparent so the background shows through.
 */
export function renderHeatmapOverlay(
  canvas: HTMLCanvasElement,
  data: HeatmapResponse,
): void {
  canvas.width = data.width;
  canvas.height = data.height;
  canvas.dataset.totalMass = String(data.total_mass);
  if (typeof CanvasRenderingContext2D === "undefined" || typeof ImageData === "undefined") {
    return; // environments without 2D canvas (bare jsdom): data attributes only
  }
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const image = new ImageData(
    heatGridToRgba(data.cells, data.width, data.height),
    data.width,
    data.height,
  );
  ctx.putImageData(image, 0, 0);
}

export function renderHeatmapCaption(el: HTMLElement, data: HeatmapResponse): void {
  el.replaceChildren();
  const mass = document.createElement("span");
  mass.className = "total-mass";
  mass.textContent = String(data.total_mass);
  el.append("cohort ", data.params.cohort, " · ", mass, " interactions · σ=",
            String(data.params.sigma));
}
