// Wire types, mirroring the service's JSON bodies.

export type SeverityName = "minor" | "major" | "critical";

export interface CategoryInfo {
  id: string;
  tag_name: string;
  label: string;
  description: string;
  allowed_severities: SeverityName[];
}

export interface TaxonomyInfo {
  name: string;
  version: string;
  severity_attribute: string;
  categories: CategoryInfo[];
  severities: SeverityName[];
}

export interface DocumentMeta {
  doc_id: string;
  student: string | null;
  cohort: string | null;
  source_lang: string | null;
  target_lang: string | null;
  created_at: string;
  version: number;
}

export interface Annotation {
  id: string;
  category_id: string;
  severity: SeverityName;
  span: [number, number];
  note: string | null;
}

export interface DocumentBody {
  doc_id: string;
  meta: DocumentMeta;
  plain_text: string;
  source_text: string | null;
  annotations: Annotation[];
  version: number;
}

export interface BreakdownEntry {
  category_id: string;
  severity: SeverityName;
  count: number;
  // exact rationals arrive as "n/d" strings when not integral
  points: number | string;
}

export interface ScoreReport {
  doc_id: string;
  word_count: number;
  total_error_points: number | string;
  tqi_exact: number | string;
  tqi_display: number;
  grade: string;
  scale: string;
  rounding_mode: string;
  breakdown: BreakdownEntry[];
}

export interface StyleInfo {
  color: "none" | "green" | "yellow" | "red";
  bold: boolean;
}

export interface RepresentationInfo {
  name: string;
  // null means "everything passes"
  include_categories: string[] | null;
  include_severities: SeverityName[] | null;
  style_map: Record<string, StyleInfo>;
  category_styles: Record<string, StyleInfo>;
  mode: "plain" | "html" | "ansi";
}

export interface Span {
  start: number;
  end: number;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}
