// Central view state plus the two pieces of request discipline the live
// control loop needs: debouncing slider changes and dropping responses
// that arrive after their parameters were superseded.

export interface ViewState {
  selectedQuestionId: string | null;
  roiSize: number;
  tau: number;
  sigma: number;
  res: number;
  bins: number;
  minEdge: number;
  minEvents: number;
  cohortA: string;
  cohortB: string;
  correlationK: number;
}

export const DEFAULT_STATE: ViewState = {
  selectedQuestionId: null,
  roiSize: 0.05,
  tau: 0.25,
  sigma: 1.5,
  res: 64,
  bins: 5,
  minEdge: 2,
  minEvents: 5,
  cohortA: "full",
  cohortB: "wrong",
  correlationK: 2.0,
};

// API-documented ranges; the UI never issues a request outside them.
export const LIMITS = {
  roiSize: { min: 0, max: 1.5 },
  tau: { min: 0.01, max: 1 },
  sigma: { min: 0, max: 8 },
  res: { min: 8, max: 512 },
  bins: { min: 1, max: 12 },
  minEdge: { min: 0, max: 50 },
  minEvents: { min: 0, max: 500 },
  correlationK: { min: 0.1, max: 100 },
} as const;

type NumericKey = keyof typeof LIMITS;

export function clampParam(key: NumericKey, value: number): number {
  const { min, max } = LIMITS[key];
  if (!Number.isFinite(value)) return DEFAULT_STATE[key];
  const clamped = Math.min(Math.max(value, min), max);
  if (key === "res" || key === "bins" || key === "minEdge" || key === "minEvents") {
    return Math.round(clamped);
  }
  return clamped;
}

export type Listener = (state: ViewState, changed: (keyof ViewState)[]) => void;

export class Store {
  private state: ViewState;
  private listeners = new Set<Listener>();

  constructor(initial: Partial<ViewState> = {}) {
    this.state = { ...DEFAULT_STATE, ...initial };
  }

  get(): ViewState {
    return this.state;
  }

  set(update: Partial<ViewState>): void {
    const sanitized: Partial<ViewState> = { ...update };
    for (const key of Object.keys(update) as (keyof ViewState)[]) {
      if (key in LIMITS) {
        const k = key as NumericKey;
        (sanitized as Record<string, unknown>)[k] = clampParam(k, update[k] as number);
      }
    }
    const changed = (Object.keys(sanitized) as (keyof ViewState)[]).filter(
      (key) => this.state[key] !== sanitized[key],
    );
    if (changed.length === 0) return;
    this.state = { ...this.state, ...sanitized };
    for (const listener of this.listeners) {
      listener(this.state, changed);
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }
}

/**
 * Latest-wins ticket counter. Take a ticket before issuing a request and
 * render only if the ticket is still current when the response lands.
 */
export class LatestGate {
  private generation = 0;

  take(): number {
    return ++this.generation;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.generation;
  }
}

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

/** Trailing-edge debounce; the UI uses >= 150 ms for slider-driven fetches. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;
  const wrapped = (...args: A) => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      const args2 = pending;
      pending = null;
      if (args2) fn(...args2);
    }, waitMs);
  };
  wrapped.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  wrapped.flush = () => {
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
      const args = pending;
      pending = null;
      if (args) fn(...args);
    }
  };
  return wrapped;
}
