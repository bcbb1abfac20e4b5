import type {
  CorrelationResponse,
  HeatmapResponse,
  QuestionSummary,
  TransitionsResponse,
} from "./types";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

export interface HeatmapParams {
  res: number;
  sigma: number;
  cohort: string;
}

export interface TransitionParams {
  roiSize: number;
  tau: number;
  minEvents: number;
  bins: number;
  minEdge: number;
  cohort: string;
  res: number;
  sigma: number;
}

function query(params: Record<string, string | number>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    search.set(key, String(value));
  }
  return search.toString();
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path);
    } catch (err) {
      throw new ServiceError(0, "unreachable", `service unreachable: ${String(err)}`);
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const error = (body as { error?: { code?: string; message?: string } } | null)?.error;
      throw new ServiceError(
        response.status,
        error?.code ?? "unknown",
        error?.message ?? `request failed with status ${response.status}`,
      );
    }
    return body as T;
  }

  questions(): Promise<QuestionSummary[]> {
    return this.get<QuestionSummary[]>("/api/questions");
  }

  heatmap(questionId: string, p: HeatmapParams): Promise<HeatmapResponse> {
    const q = query({ res: p.res, sigma: p.sigma, cohort: p.cohort });
    return this.get<HeatmapResponse>(
      `/api/questions/${encodeURIComponent(questionId)}/heatmap?${q}`,
    );
  }

  transitions(questionId: string, p: TransitionParams): Promise<TransitionsResponse> {
    const q = query({
      roi_size: p.roiSize,
      tau: p.tau,
      min_events: p.minEvents,
      bins: p.bins,
      min_edge: p.minEdge,
      cohort: p.cohort,
      res: p.res,
      sigma: p.sigma,
    });
    return this.get<TransitionsResponse>(
      `/api/questions/${encodeURIComponent(questionId)}/transitions?${q}`,
    );
  }

  correlation(k: number): Promise<CorrelationResponse> {
    return this.get<CorrelationResponse>(`/api/correlation?${query({ k })}`);
  }
}
