// Control panel: the region-size slider plus the rest of the pipeline
// parameters. Each change lands in the store; the store's subscribers
// decide what to refetch (debounced).

import type { Store, ViewState } from "../state";
import { LIMITS } from "../state";

interface SliderSpec {
  key: keyof typeof LIMITS & keyof ViewState;
  label: string;
  step: number;
}

const SLIDERS: SliderSpec[] = [
  { key: "roiSize", label: "region size (merge radius)", step: 0.01 },
  { key: "tau", label: "density threshold τ", step: 0.01 },
  { key: "sigma", label: "smoothing σ", step: 0.1 },
  { key: "res", label: "grid resolution", step: 8 },
  { key: "bins", label: "time bins", step: 1 },
  { key: "minEdge", label: "min edge count", step: 1 },
];

const COHORTS = ["all", "full", "wrong"];

export function renderControls(container: HTMLElement, store: Store): void {
  container.replaceChildren();
  const state = store.get();

  for (const spec of SLIDERS) {
    const row = document.createElement("label");
    row.className = "control-row";
    const limits = LIMITS[spec.key];
    const value = state[spec.key] as number;

    const caption = document.createElement("span");
    caption.textContent = spec.label;
    const readout = document.createElement("output");
    readout.dataset.for = spec.key;
    readout.textContent = String(value);

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = String(limits.min);
    slider.max = String(limits.max);
    slider.step = String(spec.step);
    slider.value = String(value);
    slider.dataset.param = spec.key;
    slider.addEventListener("input", () => {
      const next = Number(slider.value);
      store.set({ [spec.key]: next } as Partial<ViewState>);
      readout.textContent = String(store.get()[spec.key]);
    });

    row.append(caption, slider, readout);
    container.appendChild(row);
  }

  for (const [key, label] of [["cohortA", "cohort A"], ["cohortB", "cohort B"]] as const) {
    const row = document.createElement("label");
    row.className = "control-row";
    const caption = document.createElement("span");
    caption.textContent = label;
    const select = document.createElement("select");
    select.dataset.param = key;
    for (const cohort of COHORTS) {
      const option = document.createElement("option");
      option.value = cohort;
      option.textContent = cohort;
      option.selected = state[key] === cohort;
      select.appendChild(option);
    }
    select.addEventListener("change", () => store.set({ [key]: select.value }));
    row.append(caption, select);
    container.appendChild(row);
  }
}
