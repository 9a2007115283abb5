import type {
  Annotation,
  ApiErrorBody,
  DocumentBody,
  DocumentMeta,
  RepresentationInfo,
  ScoreReport,
  SeverityName,
  Span,
  TaxonomyInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function asError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody | null = null;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    // non-JSON error page; fall through to a generic error
  }
  if (body && typeof body.code === "string") {
    return new ApiError(response.status, body.code, body.message);
  }
  return new ApiError(response.status, "HttpError", response.statusText);
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) throw await asError(response);
  return (await response.json()) as T;
}

// The view model depends on this interface, not on the fetch client,
// so tests can drive it with a scripted fake.
export interface Api {
  getTaxonomy(): Promise<TaxonomyInfo>;
  listDocuments(): Promise<DocumentMeta[]>;
  getDocument(docId: string): Promise<DocumentBody>;
  getScore(docId: string, mode?: string): Promise<ScoreReport>;
  listRepresentations(): Promise<RepresentationInfo[]>;
  postAnnotation(
    docId: string,
    categoryId: string,
    severity: SeverityName,
    span: Span,
    baseVersion: number,
    note?: string,
  ): Promise<{ annotation: Annotation; version: number }>;
  deleteAnnotation(
    docId: string,
    annotationId: string,
    baseVersion: number,
  ): Promise<{ version: number }>;
}

export class HttpApi implements Api {
  constructor(private readonly base: string = "") {}

  getTaxonomy(): Promise<TaxonomyInfo> {
    return getJson(`${this.base}/api/taxonomy`);
  }

  async listDocuments(): Promise<DocumentMeta[]> {
    const body = await getJson<{ documents: DocumentMeta[] }>(
      `${this.base}/api/documents`,
    );
    return body.documents;
  }

  getDocument(docId: string): Promise<DocumentBody> {
    return getJson(`${this.base}/api/documents/${encodeURIComponent(docId)}`);
  }

  getScore(docId: string, mode?: string): Promise<ScoreReport> {
    const query = mode ? `?mode=${encodeURIComponent(mode)}` : "";
    return getJson(
      `${this.base}/api/documents/${encodeURIComponent(docId)}/score${query}`,
    );
  }

  async listRepresentations(): Promise<RepresentationInfo[]> {
    const body = await getJson<{ representations: RepresentationInfo[] }>(
      `${this.base}/api/representations`,
    );
    return body.representations;
  }

  async postAnnotation(
    docId: string,
    categoryId: string,
    severity: SeverityName,
    span: Span,
    baseVersion: number,
    note?: string,
  ): Promise<{ annotation: Annotation; version: number }> {
    const response = await fetch(
      `${this.base}/api/documents/${encodeURIComponent(docId)}/annotations`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          category_id: categoryId,
          severity,
          span: [span.start, span.end],
          note: note ?? null,
          base_version: baseVersion,
        }),
      },
    );
    if (!response.ok) throw await asError(response);
    return (await response.json()) as { annotation: Annotation; version: number };
  }

  async deleteAnnotation(
    docId: string,
    annotationId: string,
    baseVersion: number,
  ): Promise<{ version: number }> {
    const response = await fetch(
      `${this.base}/api/documents/${encodeURIComponent(docId)}` +
        `/annotations/${encodeURIComponent(annotationId)}` +
        `?base_version=${baseVersion}`,
      { method: "DELETE" },
    );
    if (!response.ok) throw await asError(response);
    return (await response.json()) as { version: number };
  }
}
