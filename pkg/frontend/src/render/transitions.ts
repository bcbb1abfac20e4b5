// Transition map rendering: one SVG per cohort panel, regions as pie
// glyphs at their centroids, directed arcs between them. Sector angles
// follow the time histogram; sector and arc colors share the ramp.

import { binPosition, rampColor } from "../color";
import { arcWidth, nodeRadius } from "../scale";
import type { RoiDetail, TransitionsResponse } from "../types";

const SVG_NS = "http://www.w3.org/2000/svg";
export const PANEL_SIZE = 420;

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function sectorPath(cx: number, cy: number, r: number, a0: number, a1: number): string {
  const x0 = cx + r * Math.cos(a0);
  const y0 = cy + r * Math.sin(a0);
  const x1 = cx + r * Math.cos(a1);
  const y1 = cy + r * Math.sin(a1);
  const large = a1 - a0 > Math.PI ? 1 : 0;
  return `M ${cx} ${cy} L ${x0} ${y0} A ${r} ${r} 0 ${large} 1 ${x1} ${y1} Z`;
}

function drawPie(svg: SVGSVGElement, roi: RoiDetail, maxCount: number): void {
  const cx = roi.centroid[0] * PANEL_SIZE;
  const cy = roi.centroid[1] * PANEL_SIZE;
  const r = nodeRadius(roi.event_count, maxCount);
  const group = svgEl("g", { class: "roi-node", "data-roi-id": roi.roi_id });
  group.setAttribute("data-event-count", String(roi.event_count));
  group.setAttribute("data-radius", String(r));

  const total = roi.time_hist.reduce((a, b) => a + b, 0);
  if (total === 0) {
    group.appendChild(
      svgEl("circle", { cx, cy, r, fill: rampColor(0), stroke: "#444", "stroke-width": 1 }),
    );
  } else {
    let angle = -Math.PI / 2;
    roi.time_hist.forEach((count, bin) => {
      if (count === 0) return;
      const span = (count / total) * 2 * Math.PI;
      const color = rampColor(binPosition(bin, roi.time_hist.length));
      const path = svgEl("path", {
        d: sectorPath(cx, cy, r, angle, angle + span),
        fill: color,
        stroke: "#fff",
        "stroke-width": 0.5,
        class: "pie-sector",
        "data-bin": bin,
      });
      path.setAttribute("data-color", color);
      group.appendChild(path);
      angle += span;
    });
  }
  const label = svgEl("text", {
    x: cx,
    y: cy + r + 12,
    "text-anchor": "middle",
    class: "roi-label",
  });
  label.textContent = `${roi.event_count}`;
  group.appendChild(label);
  svg.appendChild(group);
}

function drawArc(
  svg: SVGSVGElement,
  from: RoiDetail,
  to: RoiDetail,
  count: number,
  meanTime: number,
  maxCount: number,
  markerId: string,
): void {
  const x0 = from.centroid[0] * PANEL_SIZE;
  const y0 = from.centroid[1] * PANEL_SIZE;
  const x1 = to.centroid[0] * PANEL_SIZE;
  const y1 = to.centroid[1] * PANEL_SIZE;
  // bow each direction to its own side so A->B and B->A stay readable
  const mx = (x0 + x1) / 2;
  const my = (y0 + y1) / 2;
  const dx = x1 - x0;
  const dy = y1 - y0;
  const norm = Math.hypot(dx, dy) || 1;
  const offset = 18;
  const cx = mx - (dy / norm) * offset;
  const cy = my + (dx / norm) * offset;
  const path = svgEl("path", {
    d: `M ${x0} ${y0} Q ${cx} ${cy} ${x1} ${y1}`,
    fill: "none",
    stroke: rampColor(meanTime),
    "stroke-width": arcWidth(count, maxCount),
    "marker-end": `url(#${markerId})`,
    class: "transition-arc",
    "data-from": from.roi_id,
    "data-to": to.roi_id,
    "data-count": count,
    "data-mean-time": meanTime,
  });
  svg.appendChild(path);
}

/** Render one cohort's transition map into its panel. */
export function renderTransitionPanel(
  container: HTMLElement,
  data: TransitionsResponse,
  panelName: string,
): void {
  container.replaceChildren();

  const heading = document.createElement("div");
  heading.className = "panel-heading";
  const score =
    data.ordering_score === null
      ? `n/a (${data.ordering_score_reason ?? "undefined"})`
      : data.ordering_score.toFixed(3);
  heading.innerHTML =
    `<span class="panel-name"></span>` +
    `<span class="cohort-label"></span>` +
    ` · <span class="session-count"></span> sessions` +
    ` · ordering score <span class="ordering-score"></span>`;
  (heading.querySelector(".panel-name") as HTMLElement).textContent = `${panelName}: `;
  (heading.querySelector(".cohort-label") as HTMLElement).textContent = data.cohort;
  (heading.querySelector(".session-count") as HTMLElement).textContent =
    String(data.session_count);
  (heading.querySelector(".ordering-score") as HTMLElement).textContent = score;
  container.appendChild(heading);

  if (data.roi_details.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no transitions";
    container.appendChild(empty);
    return;
  }

  const svg = svgEl("svg", {
    viewBox: `0 0 ${PANEL_SIZE} ${PANEL_SIZE}`,
    width: PANEL_SIZE,
    height: PANEL_SIZE,
    class: "transition-svg",
  });
  const markerId = `arrow-${panelName.replace(/\W+/g, "")}`;
  const defs = svgEl("defs", {});
  const marker = svgEl("marker", {
    id: markerId,
    viewBox: "0 0 10 10",
    refX: 9,
    refY: 5,
    markerWidth: 6,
    markerHeight: 6,
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#555" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const byId = new Map(data.roi_details.map((r) => [r.roi_id, r]));
  const maxEdgeCount = Math.max(0, ...data.edges.map((e) => e.count));
  for (const edge of data.edges) {
    const from = byId.get(edge.from);
    const to = byId.get(edge.to);
    if (from && to) {
      drawArc(svg, from, to, edge.count, edge.mean_time, maxEdgeCount, markerId);
    }
  }
  const maxEvents = Math.max(0, ...data.roi_details.map((r) => r.event_count));
  for (const roi of data.roi_details) {
    drawPie(svg, roi, maxEvents);
  }
  container.appendChild(svg);
}
