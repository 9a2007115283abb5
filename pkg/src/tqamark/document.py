"""Stand-off annotation model for assessed translations.

The target text is stored as immutable plain text; mistakes are recorded as
character-offset spans beside it, so assessment never mutates the text.
Offsets count Unicode code points, spans are [start, end) and must either be
disjoint or properly nested; partial overlap is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

from .errors import (
    InvalidSpan,
    OverlapViolation,
    SeverityNotAllowed,
    UnknownAnnotation,
    UnknownCategory,
)
from .taxonomy import Severity, Taxonomy

_WORD_RE = re.compile(r"[^\W_]+")


def word_tokens(text: str) -> list[str]:
    """Maximal runs of alphanumeric characters (Unicode letters and digits)."""
    return _WORD_RE.findall(text)


def word_count(text: str) -> int:
    """Number of words in plain text; punctuation, quotes and whitespace separate."""
    return len(word_tokens(text))


def _now_iso() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


@dataclass(frozen=True)
class Annotation:
    """One marked mistake: category, severity and the span of text it covers."""

    id: str
    category_id: str
    severity: Severity
    start: int
    end: int
    note: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("annotation id must be non-empty")
        if self.start < 0 or self.end <= self.start:
            raise InvalidSpan(
                "span (%r, %r) is empty or out of bounds" % (self.start, self.end)
            )

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "category_id": self.category_id,
            "severity": self.severity.value,
            "span": [self.start, self.end],
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Annotation:
        start, end = d["span"]
        return cls(
            id=d["id"],
            category_id=d["category_id"],
            severity=Severity.from_str(d["severity"]),
            start=int(start),
            end=int(end),
            note=d.get("note"),
        )


@dataclass(frozen=True)
class DocumentMeta:
    """Identity and provenance of one assessed translation."""

    doc_id: str
    student: str | None = None
    cohort: str | None = None
    source_lang: str | None = None
    target_lang: str | None = None
    created_at: str = field(default_factory=_now_iso)
    version: int = 1

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        if self.version < 1:
            raise ValueError("version must be >= 1")

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "student": self.student,
            "cohort": self.cohort,
            "source_lang": self.source_lang,
            "target_lang": self.target_lang,
            "created_at": self.created_at,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, d: dict) -> DocumentMeta:
        return cls(
            doc_id=d["doc_id"],
            student=d.get("student"),
            cohort=d.get("cohort"),
            source_lang=d.get("source_lang"),
            target_lang=d.get("target_lang"),
            created_at=d.get("created_at", _now_iso()),
            version=int(d.get("version", 1)),
        )


@dataclass(frozen=True)
class MarkedDocument:
    """Plain target text plus stand-off annotations; the single source of truth."""

    meta: DocumentMeta
    plain_text: str
    source_text: str | None = None
    annotations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "annotations", tuple(self.annotations))

    def annotation_by_id(self, annotation_id: str):
        for ann in self.annotations:
            if ann.id == annotation_id:
                return ann
        return None

    def to_dict(self) -> dict:
        return {
            "meta": self.meta.to_dict(),
            "plain_text": self.plain_text,
            "source_text": self.source_text,
            "annotations": [a.to_dict() for a in self.annotations],
        }

    @classmethod
    def from_dict(cls, d: dict) -> MarkedDocument:
        return cls(
            meta=DocumentMeta.from_dict(d["meta"]),
            plain_text=d["plain_text"],
            source_text=d.get("source_text"),
            annotations=tuple(Annotation.from_dict(a) for a in d.get("annotations", [])),
        )


@dataclass(frozen=True)
class Violation:
    """One broken document invariant, named by rule token and annotation ids."""

    rule: str
    message: str
    annotation_ids: tuple = ()


def spans_conflict(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """True when two spans partially overlap (overlap without containment)."""
    s1, e1 = a
    s2, e2 = b
    if max(s1, s2) >= min(e1, e2):
        return False  # disjoint
    contains_ab = s1 <= s2 and e2 <= e1
    contains_ba = s2 <= s1 and e1 <= e2
    return not (contains_ab or contains_ba)


def canonical_order(annotations) -> tuple:
    """Sort by (start asc, end desc), stable, so outer annotations come first."""
    return tuple(sorted(annotations, key=lambda a: (a.start, -a.end)))


@dataclass
class AnnotationNode:
    """Node of the containment forest built from a properly nested annotation set."""

    annotation: Annotation
    children: list = field(default_factory=list)


def annotation_forest(annotations) -> list[AnnotationNode]:
    """Arrange properly nested annotations into a forest by containment.

    Annotations with identical spans nest in canonical order (the earlier
    one becomes the parent).  Callers must have validated nesting first.
    """
    roots: list[AnnotationNode] = []
    stack: list[AnnotationNode] = []
    for ann in canonical_order(annotations):
        node = AnnotationNode(ann)
        while stack and not (
            stack[-1].annotation.start <= ann.start and ann.end <= stack[-1].annotation.end
        ):
            stack.pop()
        if stack:
            stack[-1].children.append(node)
        else:
            roots.append(node)
        stack.append(node)
    return roots


def _next_annotation_id(existing_ids) -> str:
    taken = set(existing_ids)
    n = len(taken) + 1
    while "a%d" % n in taken:
        n += 1
    return "a%d" % n


def add_annotation(
    doc: MarkedDocument,
    taxonomy: Taxonomy,
    category_id: str,
    severity: Severity,
    span: tuple[int, int],
    note: str | None = None,
) -> tuple[MarkedDocument, Annotation]:
    """Return a new document carrying one additional mistake annotation.

    The annotation gets a fresh id and the document version is bumped.
    Raises UnknownCategory, SeverityNotAllowed, InvalidSpan or
    OverlapViolation; the input document is never modified.
    """
    category = taxonomy.category_by_id(category_id)
    if category is None:
        raise UnknownCategory("no category %r in taxonomy %r" % (category_id, taxonomy.name))
    if severity not in category.allowed_severities:
        raise SeverityNotAllowed(
            "severity %r is not allowed for category %r" % (severity.value, category_id)
        )
    start, end = span
    if not (0 <= start < end <= len(doc.plain_text)):
        raise InvalidSpan(
            "span (%r, %r) is empty or outside the text (length %d)"
            % (start, end, len(doc.plain_text))
        )
    for other in doc.annotations:
        if spans_conflict((start, end), other.span):
            raise OverlapViolation(
                "span (%d, %d) partially overlaps annotation %s at (%d, %d)"
                % (start, end, other.id, other.start, other.end)
            )
    annotation = Annotation(
        id=_next_annotation_id(a.id for a in doc.annotations),
        category_id=category_id,
        severity=severity,
        start=start,
        end=end,
        note=note,
    )
    new_doc = replace(
        doc,
        annotations=doc.annotations + (annotation,),
        meta=replace(doc.meta, version=doc.meta.version + 1),
    )
    return new_doc, annotation


def remove_annotation(doc: MarkedDocument, annotation_id: str) -> MarkedDocument:
    """Return a new document without the named annotation; version is bumped."""
    if doc.annotation_by_id(annotation_id) is None:
        raise UnknownAnnotation("no annotation %r in document %r" % (annotation_id, doc.meta.doc_id))
    return replace(
        doc,
        annotations=tuple(a for a in doc.annotations if a.id != annotation_id),
        meta=replace(doc.meta, version=doc.meta.version + 1),
    )


def validate_document(doc: MarkedDocument, taxonomy: Taxonomy) -> list[Violation]:
    """Check every document invariant; violations are data, not exceptions.

    Returns an empty list exactly when annotation ids are distinct, every
    span lies inside the text, no two spans partially overlap, and every
    annotation uses a known category with an allowed severity.
    """
    violations: list[Violation] = []
    seen_ids: set[str] = set()
    for ann in doc.annotations:
        if ann.id in seen_ids:
            violations.append(
                Violation("DuplicateId", "annotation id %r used twice" % ann.id, (ann.id,))
            )
        seen_ids.add(ann.id)

        category = taxonomy.category_by_id(ann.category_id)
        if category is None:
            violations.append(
                Violation(
                    "UnknownCategory",
                    "annotation %s references unknown category %r" % (ann.id, ann.category_id),
                    (ann.id,),
                )
            )
        elif ann.severity not in category.allowed_severities:
            violations.append(
                Violation(
                    "SeverityNotAllowed",
                    "annotation %s: severity %r not allowed for category %r"
                    % (ann.id, ann.severity.value, ann.category_id),
                    (ann.id,),
                )
            )
        if ann.end > len(doc.plain_text):
            violations.append(
                Violation(
                    "InvalidSpan",
                    "annotation %s: span (%d, %d) exceeds text length %d"
                    % (ann.id, ann.start, ann.end, len(doc.plain_text)),
                    (ann.id,),
                )
            )
    anns = doc.annotations
    for i in range(len(anns)):
        for j in range(i + 1, len(anns)):
            if spans_conflict(anns[i].span, anns[j].span):
                violations.append(
                    Violation(
                        "OverlapViolation",
                        "annotations %s (%d, %d) and %s (%d, %d) partially overlap"
                        % (
                            anns[i].id,
                            anns[i].start,
                            anns[i].end,
                            anns[j].id,
                            anns[j].start,
                            anns[j].end,
                        ),
                        (anns[i].id, anns[j].id),
                    )
                )
    return violations
