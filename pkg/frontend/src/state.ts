// The view model.  Pure state transitions driven through an injected Api,
// so the whole annotate/score/filter flow is testable without a browser.
//
// Two rules hold everywhere:
//   - document text is never modified, only annotation lists change;
//   - the displayed score always comes from the score endpoint, never from
//     client arithmetic, so the panel and the CLI can never disagree.

import type { Api } from "./api.js";
import { ApiError } from "./api.js";
import type {
  Annotation,
  ScoreReport,
  SeverityName,
  Span,
} from "./types.js";

export interface UiState {
  docId: string | null;
  text: string;
  annotations: Annotation[];
  version: number;
  selection: Span | null;
  representation: string;
  score: ScoreReport | null;
  pending: boolean;
  banner: string | null;
  conflict: boolean;
}

const TRUNCATE = "truncate-error-percentage";

export class Store {
  state: UiState = {
    docId: null,
    text: "",
    annotations: [],
    version: 0,
    selection: null,
    representation: "severity-highlight",
    score: null,
    pending: false,
    banner: null,
    conflict: false,
  };

  private listeners: Array<(state: UiState) => void> = [];

  constructor(
    private readonly api: Api,
    private readonly scoreMode: string = TRUNCATE,
  ) {}

  subscribe(listener: (state: UiState) => void): void {
    this.listeners.push(listener);
  }

  private changed(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async loadDocument(docId: string): Promise<void> {
    if (this.state.pending) return;
    this.state = { ...this.state, pending: true, banner: null };
    this.changed();
    try {
      const doc = await this.api.getDocument(docId);
      const score = await this.api.getScore(docId, this.scoreMode);
      this.state = {
        ...this.state,
        docId: doc.doc_id,
        text: doc.plain_text,
        annotations: doc.annotations,
        version: doc.version,
        selection: null,
        score,
        pending: false,
        banner: null,
        conflict: false,
      };
    } catch (error) {
      // failed loads leave the current document alone
      this.state = { ...this.state, pending: false, banner: describe(error) };
    }
    this.changed();
  }

  setSelection(span: Span | null): void {
    if (span !== null) {
      const valid = 0 <= span.start && span.start < span.end && span.end <= this.state.text.length;
      if (!valid) span = null;
    }
    this.state = { ...this.state, selection: span };
    this.changed();
  }

  toggleRepresentation(name: string): void {
    this.state = { ...this.state, representation: name };
    this.changed();
  }

  async tagSelection(categoryId: string, severity: SeverityName): Promise<void> {
    const { docId, selection, pending, version } = this.state;
    if (docId === null || selection === null || pending) return;
    this.state = { ...this.state, pending: true };
    this.changed();
    try {
      const created = await this.api.postAnnotation(
        docId,
        categoryId,
        severity,
        selection,
        version,
      );
      const score = await this.api.getScore(docId, this.scoreMode);
      this.state = {
        ...this.state,
        annotations: [...this.state.annotations, created.annotation],
        version: created.version,
        selection: null,
        score,
        pending: false,
        banner: null,
      };
    } catch (error) {
      // selection survives a rejected tag so the critic can retry
      this.state = {
        ...this.state,
        pending: false,
        banner: describe(error),
        conflict: isConflict(error),
      };
    }
    this.changed();
  }

  async deleteAnnotation(annotationId: string): Promise<void> {
    const { docId, pending, version } = this.state;
    if (docId === null || pending) return;
    this.state = { ...this.state, pending: true };
    this.changed();
    try {
      const result = await this.api.deleteAnnotation(docId, annotationId, version);
      const score = await this.api.getScore(docId, this.scoreMode);
      this.state = {
        ...this.state,
        annotations: this.state.annotations.filter((a) => a.id !== annotationId),
        version: result.version,
        score,
        pending: false,
        banner: null,
      };
    } catch (error) {
      this.state = {
        ...this.state,
        pending: false,
        banner: describe(error),
        conflict: isConflict(error),
      };
    }
    this.changed();
  }

  /** Conflict recovery: refetch the authoritative document and score. */
  async reload(): Promise<void> {
    const docId = this.state.docId;
    if (docId === null) return;
    this.state = { ...this.state, conflict: false, pending: false };
    await this.loadDocument(docId);
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return error instanceof Error ? error.message : String(error);
}

function isConflict(error: unknown): boolean {
  return error instanceof ApiError && error.status === 409;
}
