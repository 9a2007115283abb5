"""HTTP facade over a corpus: documents, annotation editing, scoring, rendering.

Error bodies are `{"status": ..., "code": ..., "message": ...}` where code is
a domain error token or one of NotFound / VersionConflict / BadRequest.
Writes are funneled through one lock; the version check happens inside it,
so a stale base_version can never change state.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import corpus as corpus_store
from .config import AssessmentConfig, default_config
from .document import add_annotation, remove_annotation
from .errors import (
    DocumentNotFound,
    InvalidDocument,
    InvalidSpan,
    OverlapViolation,
    SeverityNotAllowed,
    StaleVersion,
    TqaError,
    UnknownAnnotation,
    UnknownCategory,
    UnknownRepresentation,
    UnknownRoundingMode,
    UnknownScale,
)
from .rendering import Mode, default_stylesheet, render
from .scoring import RoundingMode, encode_report, score
from .taxonomy import SEVERITY_ORDER, Severity

#: HTTP status per domain error type; anything unlisted is a 500.
_STATUS = {
    DocumentNotFound: 404,
    UnknownAnnotation: 404,
    StaleVersion: 409,
    UnknownCategory: 422,
    SeverityNotAllowed: 422,
    InvalidSpan: 422,
    OverlapViolation: 422,
    InvalidDocument: 422,
    UnknownScale: 400,
    UnknownRoundingMode: 400,
    UnknownRepresentation: 400,
}

#: Body codes that differ from the exception's own token.
_CODE = {
    DocumentNotFound: "NotFound",
    StaleVersion: "VersionConflict",
}


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message},
    )


class AnnotationIn(BaseModel):
    category_id: str
    severity: str
    span: tuple[int, int]
    note: str | None = None
    base_version: int


def _document_body(doc) -> dict:
    return {
        "doc_id": doc.meta.doc_id,
        "meta": doc.meta.to_dict(),
        "plain_text": doc.plain_text,
        "source_text": doc.source_text,
        "annotations": [a.to_dict() for a in doc.annotations],
        "version": doc.meta.version,
    }


def create_app(
    corpus_path,
    config: AssessmentConfig | None = None,
    ui_dir=None,
) -> FastAPI:
    """Build the service around the corpus at corpus_path."""
    config = config or default_config()
    app = FastAPI(title="tqamark annotation service", docs_url=None, redoc_url=None)
    state = app.state
    state.corpus = corpus_store.open_corpus(corpus_path)
    state.config = config
    state.write_lock = threading.Lock()

    @app.exception_handler(TqaError)
    async def domain_error(request: Request, exc: TqaError):
        status = _STATUS.get(type(exc), 500)
        return _error_response(status, _CODE.get(type(exc), exc.code), str(exc))

    @app.exception_handler(RequestValidationError)
    async def bad_body(request: Request, exc: RequestValidationError):
        return _error_response(400, "BadRequest", str(exc.errors()))

    @app.get("/api/taxonomy")
    def get_taxonomy():
        body = state.corpus.taxonomy.to_dict()
        body["severities"] = [s.value for s in SEVERITY_ORDER]
        return body

    @app.get("/api/documents")
    def list_documents():
        corpus = state.corpus
        return {
            "documents": [
                corpus_store.get_document(corpus, doc_id).meta.to_dict()
                for doc_id in corpus.doc_ids()
            ]
        }

    @app.get("/api/documents/{doc_id}")
    def get_document(doc_id: str):
        return _document_body(corpus_store.get_document(state.corpus, doc_id))

    @app.post("/api/documents/{doc_id}/annotations", status_code=201)
    def post_annotation(doc_id: str, body: AnnotationIn):
        try:
            severity = Severity.from_str(body.severity)
        except ValueError as exc:
            return _error_response(400, "BadRequest", str(exc))
        with state.write_lock:
            doc = corpus_store.get_document(state.corpus, doc_id)
            if body.base_version != doc.meta.version:
                raise StaleVersion(
                    "document %r is at version %d, request is based on %d"
                    % (doc_id, doc.meta.version, body.base_version)
                )
            updated, annotation = add_annotation(
                doc,
                state.corpus.taxonomy,
                body.category_id,
                severity,
                body.span,
                note=body.note,
            )
            state.corpus = corpus_store.put_document(state.corpus, updated)
        return {"annotation": annotation.to_dict(), "version": updated.meta.version}

    @app.delete("/api/documents/{doc_id}/annotations/{annotation_id}")
    def delete_annotation(doc_id: str, annotation_id: str, base_version: int):
        with state.write_lock:
            doc = corpus_store.get_document(state.corpus, doc_id)
            if base_version != doc.meta.version:
                raise StaleVersion(
                    "document %r is at version %d, request is based on %d"
                    % (doc_id, doc.meta.version, base_version)
                )
            updated = remove_annotation(doc, annotation_id)
            state.corpus = corpus_store.put_document(state.corpus, updated)
        return {"version": updated.meta.version}

    @app.get("/api/documents/{doc_id}/score")
    def get_score(doc_id: str, scale: str | None = None, mode: str | None = None):
        doc = corpus_store.get_document(state.corpus, doc_id)
        rounding = config.rounding_mode if mode is None else RoundingMode.from_str(mode)
        report = score(
            doc,
            state.corpus.taxonomy,
            config.weights,
            config.scale(scale),
            rounding,
        )
        # same canonical bytes the CLI prints with --json
        return Response(content=encode_report(report), media_type="application/json")

    @app.get("/api/documents/{doc_id}/render")
    def get_render(doc_id: str, representation: str = "severity-highlight"):
        doc = corpus_store.get_document(state.corpus, doc_id)
        rep = config.representation(representation)
        fragment = render(doc, state.corpus.taxonomy, rep, mode=Mode.HTML)
        return {
            "doc_id": doc_id,
            "representation": rep.name,
            "html": fragment,
            "stylesheet": "/stylesheet.css",
        }

    @app.get("/api/representations")
    def list_representations():
        return {"representations": [r.to_dict() for r in config.representations.values()]}

    @app.get("/stylesheet.css")
    def stylesheet():
        return Response(content=default_stylesheet(), media_type="text/css")

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
