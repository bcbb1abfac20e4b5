// Shapes of the service's JSON responses. The UI computes nothing itself:
// every number it shows comes from one of these fields.

export interface QuestionSummary {
  question_id: string;
  title: string | null;
  difficulty: number;
  n_sessions: number;
  mean_score_norm: number | null;
}

export interface HeatmapResponse {
  width: number;
  height: number;
  sigma: number;
  cells: number[];
  total_mass: number;
  params: {
    question_id: string;
    res: number;
    sigma: number;
    cohort: string;
  };
}

export interface RoiDetail {
  roi_id: number;
  centroid: [number, number];
  bbox: [number, number, number, number];
  event_count: number;
  type_counts: Record<string, number>;
  time_hist: number[];
}

export interface TransitionEdgeDto {
  from: number;
  to: number;
  count: number;
  mean_time: number;
}

export interface TransitionsResponse {
  cohort: string;
  session_count: number;
  rois: number[];
  edges: TransitionEdgeDto[];
  roi_first_visit: Record<string, number>;
  ordering_score: number | null;
  ordering_score_reason?: string;
  roi_details: RoiDetail[];
  params: Record<string, unknown>;
}

export interface FlaggedDto {
  question_id: string;
  residual: number;
  direction: "easier_than_labeled" | "harder_than_labeled";
}

export interface CorrelationRow {
  question_id: string;
  difficulty: number;
  n_sessions: number;
  mean_score_norm: number;
  residual: number;
  flagged: boolean;
}

export interface CorrelationResponse {
  pearson_r: number;
  spearman_rho: number;
  k_sigma: number;
  intercept: number;
  slope: number;
  residual_sigma: number;
  per_question: CorrelationRow[];
  flagged: FlaggedDto[];
  unscored: { question_id: string; difficulty: number }[];
}
