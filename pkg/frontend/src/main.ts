import { ApiClient, ServiceError } from "./api";
import { renderControls } from "./render/controls";
import { renderCorrelation, renderCorrelationError } from "./render/correlation";
import {
  renderHeatmapCaption,
  renderHeatmapOverlay,
  renderQuestionList,
} from "./render/overview";
import { renderTransitionPanel } from "./render/transitions";
import { debounce, LatestGate, Store } from "./state";
import type { ViewState } from "./state";

const PARAM_KEYS: (keyof ViewState)[] = [
  "roiSize", "tau", "sigma", "res", "bins", "minEdge", "minEvents",
  "cohortA", "cohortB",
];

export function bootstrap(root: Document, api: ApiClient): Store {
  const store = new Store();
  const $ = (id: string) => {
    const el = root.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el;
  };
  const banner = $("error-banner");
  const questionsEl = $("question-list");
  const heatCanvas = $("heatmap-canvas") as HTMLCanvasElement;
  const heatCaption = $("heatmap-caption");
  const panelA = $("transitions-a");
  const panelB = $("transitions-b");
  const correlationEl = $("correlation-view");
  const controlsEl = $("control-panel");

  const questionsGate = new LatestGate();
  const heatmapGate = new LatestGate();
  const transitionsGate = new LatestGate();
  const correlationGate = new LatestGate();

  const showError = (err: unknown) => {
    banner.textContent =
      err instanceof ServiceError ? `${err.code}: ${err.message}` : String(err);
    banner.classList.remove("hidden");
  };
  const clearError = () => banner.classList.add("hidden");

  async function refreshQuestions(): Promise<void> {
    const ticket = questionsGate.take();
    try {
      const questions = await api.questions();
      if (!questionsGate.isCurrent(ticket)) return;
      clearError();
      renderQuestionList(questionsEl, questions, store.get().selectedQuestionId,
                         (id) => store.set({ selectedQuestionId: id }));
      if (store.get().selectedQuestionId === null && questions.length > 0) {
        store.set({ selectedQuestionId: questions[0]!.question_id });
      }
    } catch (err) {
      if (questionsGate.isCurrent(ticket)) showError(err);
    }
  }

  async function refreshHeatmap(): Promise<void> {
    const { selectedQuestionId, res, sigma } = store.get();
    if (!selectedQuestionId) return;
    const ticket = heatmapGate.take();
    try {
      const data = await api.heatmap(selectedQuestionId, { res, sigma, cohort: "all" });
      if (!heatmapGate.isCurrent(ticket)) return;
      clearError();
      renderHeatmapOverlay(heatCanvas, data);
      renderHeatmapCaption(heatCaption, data);
    } catch (err) {
      if (heatmapGate.isCurrent(ticket)) showError(err);
    }
  }

  async function refreshTransitions(): Promise<void> {
    const state = store.get();
    if (!state.selectedQuestionId) return;
    const ticket = transitionsGate.take();
    const params = {
      roiSize: state.roiSize,
      tau: state.tau,
      minEvents: state.minEvents,
      bins: state.bins,
      minEdge: state.minEdge,
      res: state.res,
      sigma: state.sigma,
    };
    try {
      const [a, b] = await Promise.all([
        api.transitions(state.selectedQuestionId, { ...params, cohort: state.cohortA }),
        api.transitions(state.selectedQuestionId, { ...params, cohort: state.cohortB }),
      ]);
      if (!transitionsGate.isCurrent(ticket)) return; // superseded: never rendered
      clearError();
      renderTransitionPanel(panelA, a, "A");
      renderTransitionPanel(panelB, b, "B");
    } catch (err) {
      if (transitionsGate.isCurrent(ticket)) showError(err);
    }
  }

  async function refreshCorrelation(): Promise<void> {
    const ticket = correlationGate.take();
    try {
      const data = await api.correlation(store.get().correlationK);
      if (!correlationGate.isCurrent(ticket)) return;
      renderCorrelation(correlationEl, data,
                        (id) => store.set({ selectedQuestionId: id }));
    } catch (err) {
      if (!correlationGate.isCurrent(ticket)) return;
      if (err instanceof ServiceError && err.status === 409) {
        renderCorrelationError(correlationEl, err.message);
      } else {
        showError(err);
      }
    }
  }

  const debouncedTransitions = debounce(refreshTransitions, 150);
  const debouncedHeatmap = debounce(refreshHeatmap, 150);

  store.subscribe((_state, changed) => {
    if (changed.includes("selectedQuestionId")) {
      refreshQuestions();
      refreshHeatmap();
      refreshTransitions();
      return;
    }
    if (changed.some((key) => PARAM_KEYS.includes(key))) {
      debouncedTransitions();
      if (changed.includes("sigma") || changed.includes("res")) {
        debouncedHeatmap();
      }
    }
    if (changed.includes("correlationK")) {
      refreshCorrelation();
    }
  });

  renderControls(controlsEl, store);
  refreshQuestions();
  refreshCorrelation();
  return store;
}

if (typeof window !== "undefined" && !("__SOLVETRACE_TEST__" in globalThis)) {
  bootstrap(document, new ApiClient(""));
}
