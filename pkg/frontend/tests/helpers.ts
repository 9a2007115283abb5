import type {
  Annotation,
  DocumentBody,
  RepresentationInfo,
  SeverityName,
} from "../src/types.js";

// the golden Russian passage the service fixture uses, unannotated
export const PASSAGE =
  "Два способа переводить «ничего» не делая. Уже на протяжении сорока лет" +
  " машинный или автоматический перевод остаётся «голубой мечтой» сферы" +
  " информационных технологий. И хотя результаты машинного перевода" +
  " оставляют желать лучшего, данная технология анализа языка претерпела" +
  " значительные улучшения, позволяющие нам уже сегодня пользоваться" +
  " проверкой правописания и грамматики, и даже такими сложными" +
  " инструментами как поисковые машины.";

export const STYLE_SPAN: [number, number] = [23, 40];
export const CONTENT_SPAN: [number, number] = [166, 227];

export function representation(
  overrides: Partial<RepresentationInfo> & { name: string },
): RepresentationInfo {
  return {
    include_categories: null,
    include_severities: null,
    style_map: {},
    category_styles: {},
    mode: "html",
    ...overrides,
  };
}

export const SEVERITY_HIGHLIGHT = representation({ name: "severity-highlight" });
export const CRITICAL_ONLY = representation({
  name: "critical-only",
  include_severities: ["critical"],
});
export const PLAIN = representation({
  name: "plain",
  include_severities: [],
  mode: "plain",
});

export function annotation(
  id: string,
  categoryId: string,
  severity: SeverityName,
  span: [number, number],
  note: string | null = null,
): Annotation {
  return { id, category_id: categoryId, severity, span, note };
}

export function documentBody(
  docId: string,
  text: string,
  annotations: Annotation[] = [],
  version = 1,
): DocumentBody {
  return {
    doc_id: docId,
    meta: {
      doc_id: docId,
      student: null,
      cohort: null,
      source_lang: null,
      target_lang: null,
      created_at: "2026-01-01T00:00:00+00:00",
      version,
    },
    plain_text: text,
    source_text: null,
    annotations,
    version,
  };
}
