/** Payload shapes of the storydeck session service (see GET /schemas). */

export type Mark = "bar" | "line" | "area" | "point" | "arc";

export type AnnotationKind =
  | "point_highlight"
  | "pair_link_with_arrows"
  | "trend_line";

export interface Annotation {
  kind: AnnotationKind;
  targets: string[];
  style?: { color?: string; dim_others?: boolean };
  /** pair_link_with_arrows only */
  direction?: "increasing" | "decreasing";
  /** trend_line only */
  slope?: number | null;
  intercept?: number | null;
}

export interface Channel {
  field?: string;
  aggregate?: string;
}

export interface ChartSpecDoc {
  mark: Mark;
  encoding: { x?: Channel; y?: Channel; color?: Channel };
  filter?: unknown;
  annotations?: Annotation[];
  [key: string]: unknown;
}

/** One (key, value) row of the aggregated series behind a chart. */
export type SeriesRow = [string, number];

export const FACT_TYPES = [
  "Majority",
  "Extreme",
  "Outlier",
  "TurningPoint",
  "Difference",
  "Trend",
] as const;

export type FactTypeName = (typeof FACT_TYPES)[number];

export interface FactDto {
  id: string;
  chart_id: string;
  fact_type: FactTypeName;
  focus: string[];
  description: string;
  user_edited_description: boolean;
  embellished_spec: ChartSpecDoc;
  series: SeriesRow[];
  score: { total: number; significance: number; impact: number; suitability: number };
  origin: "mined" | "user";
  [key: string]: unknown;
}

export interface OutlineFact {
  id: string;
  chart_id: string;
  chart_type: Mark;
  fact_type: FactTypeName;
  description: string;
  pinned: boolean;
}

export interface OutlineSlide {
  id: string;
  title: string;
  title_user_edited: boolean;
  pinned: boolean;
  facts: OutlineFact[];
}

export interface Outline {
  revision: number;
  selected: string[];
  slides: OutlineSlide[];
}

export interface SessionInfo {
  session_id: string;
  revision: number;
  datasets: string[];
  charts: { chart_id: string; creation_index: number; fact_ids: string[] }[];
  selected: string[];
  config: Record<string, unknown>;
}

export interface DeckDoc {
  schema_version: number;
  slides: { title: string; blocks: { fact_id: string; chart_id: string }[] }[];
  [key: string]: unknown;
}

export type ExportFormat = "json" | "markdown" | "html";
