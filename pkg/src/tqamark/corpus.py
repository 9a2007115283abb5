"""On-disk corpus of assessed translations, with queries and statistics.

Layout under the corpus root:

    manifest            corpus name, taxonomy reference, document index
    taxonomy            JSON snapshot of the corpus taxonomy
    docs/<doc_id>.tqm   the marked-up text (the human-diffable record)
    docs/<doc_id>.meta  JSON sidecar: meta, source text, annotation ids

Every write goes through write-temp-then-rename, so readers never observe a
half-written file.  Writers must be serialized externally (the HTTP service
does this with a lock); readers may run concurrently.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from xml.etree import ElementTree

from .dialect import parse, serialize
from .document import (
    Annotation,
    DocumentMeta,
    MarkedDocument,
    canonical_order,
    validate_document,
    word_tokens,
)
from .errors import (
    DocumentNotFound,
    InvalidDocument,
    IoFailure,
    MalformedSegmentFile,
    MissingVariant,
    PathOccupied,
    StaleVersion,
    UnknownCategoryInQuery,
)
from .scoring import RoundingMode, WeightConfig, compute_tqi, error_points
from .taxonomy import Severity, Taxonomy

MANIFEST_NAME = "manifest"
TAXONOMY_NAME = "taxonomy"
DOCS_DIR = "docs"

_DOC_ID_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9._-]*\Z")

_XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8", newline="\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure("cannot write %s: %s" % (path, exc)) from exc


def _read_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure("cannot read %s: %s" % (path, exc)) from exc
    except ValueError as exc:
        raise IoFailure("%s is not valid JSON: %s" % (path, exc)) from exc


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    meta_file: str
    version: int

    def to_dict(self) -> dict:
        return {"file": self.file, "meta": self.meta_file, "version": self.version}

    @classmethod
    def from_dict(cls, d: dict) -> "ManifestEntry":
        return cls(file=d["file"], meta_file=d["meta"], version=int(d["version"]))


@dataclass(frozen=True)
class Corpus:
    """Handle to one on-disk corpus; the index mirrors the manifest file."""

    root: Path
    name: str
    taxonomy: Taxonomy
    index: dict  # doc_id -> ManifestEntry

    def doc_ids(self) -> list:
        return sorted(self.index)

    def __len__(self) -> int:
        return len(self.index)


def _manifest_dict(corpus: Corpus) -> dict:
    return {
        "name": corpus.name,
        "taxonomy": {"name": corpus.taxonomy.name, "version": corpus.taxonomy.version},
        "documents": {
            doc_id: corpus.index[doc_id].to_dict() for doc_id in sorted(corpus.index)
        },
    }


def _write_manifest(corpus: Corpus) -> None:
    _write_atomic(
        corpus.root / MANIFEST_NAME,
        json.dumps(_manifest_dict(corpus), ensure_ascii=False, indent=2) + "\n",
    )


def init_corpus(path, taxonomy: Taxonomy, name: str | None = None) -> Corpus:
    """Create an empty corpus at path (which must be empty or absent)."""
    root = Path(path)
    if root.exists():
        if not root.is_dir():
            raise PathOccupied("%s exists and is not a directory" % root)
        if any(root.iterdir()):
            raise PathOccupied("%s exists and is not empty" % root)
    try:
        (root / DOCS_DIR).mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure("cannot create corpus at %s: %s" % (root, exc)) from exc
    corpus = Corpus(
        root=root,
        name=name or root.name or "corpus",
        taxonomy=taxonomy,
        index={},
    )
    _write_atomic(
        root / TAXONOMY_NAME,
        json.dumps(taxonomy.to_dict(), ensure_ascii=False, indent=2) + "\n",
    )
    _write_manifest(corpus)
    return corpus


def open_corpus(path) -> Corpus:
    root = Path(path)
    manifest = _read_json(root / MANIFEST_NAME)
    taxonomy = Taxonomy.from_dict(_read_json(root / TAXONOMY_NAME))
    index = {
        doc_id: ManifestEntry.from_dict(entry)
        for doc_id, entry in manifest.get("documents", {}).items()
    }
    return Corpus(root=root, name=manifest.get("name", root.name), taxonomy=taxonomy, index=index)


def put_document(corpus: Corpus, doc: MarkedDocument) -> Corpus:
    """Persist doc; overwriting requires a strictly newer version."""
    doc_id = doc.meta.doc_id
    if not _DOC_ID_RE.match(doc_id):
        raise InvalidDocument(
            "doc_id %r is not storable (use letters, digits, '.', '_', '-')" % doc_id
        )
    violations = validate_document(doc, corpus.taxonomy)
    if violations:
        raise InvalidDocument("; ".join(v.message for v in violations))
    stored = corpus.index.get(doc_id)
    if stored is not None and doc.meta.version <= stored.version:
        raise StaleVersion(
            "document %r is at version %d; incoming version %d is not newer"
            % (doc_id, stored.version, doc.meta.version)
        )

    entry = ManifestEntry(
        file="%s/%s.tqm" % (DOCS_DIR, doc_id),
        meta_file="%s/%s.meta" % (DOCS_DIR, doc_id),
        version=doc.meta.version,
    )
    sidecar = {
        "meta": doc.meta.to_dict(),
        "source_text": doc.source_text,
        # ids in start-tag order, for rebinding after parse; the original
        # tuple order separately, so get_document restores it exactly
        "annotation_ids": [a.id for a in canonical_order(doc.annotations)],
        "annotation_order": [a.id for a in doc.annotations],
    }
    _write_atomic(corpus.root / entry.file, serialize(doc, corpus.taxonomy))
    _write_atomic(
        corpus.root / entry.meta_file,
        json.dumps(sidecar, ensure_ascii=False, indent=2) + "\n",
    )
    updated = replace(corpus, index={**corpus.index, doc_id: entry})
    _write_manifest(updated)
    return updated


def get_document(corpus: Corpus, doc_id: str) -> MarkedDocument:
    entry = corpus.index.get(doc_id)
    if entry is None:
        raise DocumentNotFound("no document %r in corpus %r" % (doc_id, corpus.name))
    try:
        marked = (corpus.root / entry.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure("cannot read %s: %s" % (entry.file, exc)) from exc
    sidecar = _read_json(corpus.root / entry.meta_file)
    meta = DocumentMeta.from_dict(sidecar["meta"])
    doc = parse(marked, corpus.taxonomy, meta=meta, source_text=sidecar.get("source_text"))

    stored_ids = sidecar.get("annotation_ids", [])
    if len(stored_ids) != len(doc.annotations):
        raise IoFailure(
            "sidecar for %r lists %d annotation ids but the text has %d"
            % (doc_id, len(stored_ids), len(doc.annotations))
        )
    rebound = [replace(a, id=stored) for a, stored in zip(doc.annotations, stored_ids)]
    order = sidecar.get("annotation_order", stored_ids)
    by_id = {a.id: a for a in rebound}
    if sorted(order) != sorted(by_id):
        raise IoFailure("sidecar for %r has inconsistent annotation ids" % doc_id)
    return replace(doc, annotations=tuple(by_id[i] for i in order))


def list_documents(corpus: Corpus) -> list:
    """Metas of all stored documents, ordered by doc_id."""
    return [get_document(corpus, doc_id).meta for doc_id in corpus.doc_ids()]


def rebuild_manifest(path) -> Corpus:
    """Reconstruct the manifest by rescanning docs/; recovers a deleted index."""
    root = Path(path)
    taxonomy = Taxonomy.from_dict(_read_json(root / TAXONOMY_NAME))
    name = root.name
    existing = root / MANIFEST_NAME
    if existing.exists():
        name = _read_json(existing).get("name", name)
    index = {}
    for tqm in sorted((root / DOCS_DIR).glob("*.tqm")):
        doc_id = tqm.stem
        sidecar = _read_json(root / DOCS_DIR / ("%s.meta" % doc_id))
        index[doc_id] = ManifestEntry(
            file="%s/%s" % (DOCS_DIR, tqm.name),
            meta_file="%s/%s.meta" % (DOCS_DIR, doc_id),
            version=int(sidecar["meta"]["version"]),
        )
    corpus = Corpus(root=root, name=name, taxonomy=taxonomy, index=index)
    _write_manifest(corpus)
    return corpus


# --- queries ------------------------------------------------------------------

@dataclass(frozen=True)
class Query:
    """Conjunctive annotation filter; at least one field must be set."""

    category_id: str | None = None
    severity: Severity | None = None
    contains_word: str | None = None
    cohort: str | None = None
    doc_id: str | None = None

    def __post_init__(self):
        if all(
            value is None
            for value in (
                self.category_id,
                self.severity,
                self.contains_word,
                self.cohort,
                self.doc_id,
            )
        ):
            raise ValueError("query must set at least one field")


@dataclass(frozen=True)
class QueryHit:
    doc_id: str
    annotation_id: str
    category_id: str
    severity: Severity
    start: int
    end: int
    span_text: str
    context: str

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "annotation_id": self.annotation_id,
            "category_id": self.category_id,
            "severity": self.severity.value,
            "span": [self.start, self.end],
            "span_text": self.span_text,
            "context": self.context,
        }


def _word_in(needle: str, text: str) -> bool:
    folded = needle.casefold()
    return any(token.casefold() == folded for token in word_tokens(text))


def annotation_matches(q: Query, doc: MarkedDocument, ann: Annotation) -> bool:
    """Does one annotation satisfy every set field of the query?"""
    if q.doc_id is not None and doc.meta.doc_id != q.doc_id:
        return False
    if q.cohort is not None and doc.meta.cohort != q.cohort:
        return False
    if q.category_id is not None and ann.category_id != q.category_id:
        return False
    if q.severity is not None and ann.severity is not q.severity:
        return False
    if q.contains_word is not None and not _word_in(
        q.contains_word, doc.plain_text[ann.start:ann.end]
    ):
        return False
    return True


def _hit(doc: MarkedDocument, ann: Annotation) -> QueryHit:
    text = doc.plain_text
    return QueryHit(
        doc_id=doc.meta.doc_id,
        annotation_id=ann.id,
        category_id=ann.category_id,
        severity=ann.severity,
        start=ann.start,
        end=ann.end,
        span_text=text[ann.start:ann.end],
        context=text[max(0, ann.start - 40):min(len(text), ann.end + 40)],
    )


def query(corpus: Corpus, q: Query) -> list:
    """All annotations satisfying every set field, ordered by (doc_id, start)."""
    if q.category_id is not None and corpus.taxonomy.category_by_id(q.category_id) is None:
        raise UnknownCategoryInQuery("no category %r in the corpus taxonomy" % q.category_id)
    hits = []
    for doc_id in corpus.doc_ids():
        if q.doc_id is not None and doc_id != q.doc_id:
            continue
        doc = get_document(corpus, doc_id)
        for ann in sorted(doc.annotations, key=lambda a: (a.start, -a.end)):
            if annotation_matches(q, doc, ann):
                hits.append(_hit(doc, ann))
    return hits


# --- statistics ---------------------------------------------------------------

@dataclass(frozen=True)
class CorpusStats:
    """Aggregate report; TQI figures use exact-2dp display values."""

    document_count: int
    annotation_count: int
    counts: dict  # (category_id, Severity) -> int
    mean_tqi: Fraction | None
    min_tqi: Fraction | None
    max_tqi: Fraction | None

    def to_dict(self) -> dict:
        def tqi(value):
            return None if value is None else float(value)

        return {
            "document_count": self.document_count,
            "annotation_count": self.annotation_count,
            "counts": [
                {"category_id": cid, "severity": sev.value, "count": n}
                for (cid, sev), n in sorted(
                    self.counts.items(), key=lambda kv: (kv[0][0], kv[0][1].rank)
                )
            ],
            "mean_tqi": tqi(self.mean_tqi),
            "min_tqi": tqi(self.min_tqi),
            "max_tqi": tqi(self.max_tqi),
        }


def stats(corpus: Corpus, cohort: str | None = None, weights: WeightConfig | None = None) -> CorpusStats:
    """Counts per (category, severity) plus TQI aggregates, optionally by cohort.

    Documents whose target text has no words are counted but excluded from
    the TQI aggregates (there is no index to aggregate for them).
    """
    weights = weights or WeightConfig()
    counts: dict = {}
    tqis: list = []
    documents = 0
    annotations = 0
    for doc_id in corpus.doc_ids():
        doc = get_document(corpus, doc_id)
        if cohort is not None and doc.meta.cohort != cohort:
            continue
        documents += 1
        for ann in doc.annotations:
            key = (ann.category_id, ann.severity)
            counts[key] = counts.get(key, 0) + 1
            annotations += 1
        words = len(word_tokens(doc.plain_text))
        if words:
            tqis.append(compute_tqi(error_points(doc, weights), words, RoundingMode.EXACT_2DP))
    return CorpusStats(
        document_count=documents,
        annotation_count=annotations,
        counts=counts,
        mean_tqi=sum(tqis, Fraction(0)) / len(tqis) if tqis else None,
        min_tqi=min(tqis) if tqis else None,
        max_tqi=max(tqis) if tqis else None,
    )


# --- segment import -------------------------------------------------------------

def _seg_text(tuv) -> str:
    seg = tuv.find("seg")
    if seg is None:
        raise MalformedSegmentFile("translation variant lacks a seg element")
    return "".join(seg.itertext())


def _tuv_lang(tuv) -> str | None:
    return tuv.get(_XML_LANG) or tuv.get("lang")


def import_segments(corpus: Corpus, path) -> tuple:
    """Import source/target segment pairs as unannotated documents.

    Accepts the translation-unit subset: any root, `tu` elements each holding
    exactly two `tuv` variants with `seg` children; first variant is the
    source, second the target.  Returns (updated corpus, new doc ids).
    """
    path = Path(path)
    try:
        tree = ElementTree.parse(path)
    except OSError as exc:
        raise IoFailure("cannot read %s: %s" % (path, exc)) from exc
    except ElementTree.ParseError as exc:
        raise MalformedSegmentFile("%s: %s" % (path.name, exc)) from exc

    units = tree.getroot().iter("tu")
    doc_ids: list = []
    counter = 0
    for tu in units:
        counter += 1
        tuvs = tu.findall("tuv")
        if len(tuvs) < 2:
            raise MissingVariant(
                "translation unit %d has %d variant(s); need source and target"
                % (counter, len(tuvs))
            )
        if len(tuvs) > 2:
            raise MalformedSegmentFile(
                "translation unit %d has %d variants; exactly two are supported"
                % (counter, len(tuvs))
            )
        source, target = tuvs
        doc_id = tu.get("tuid") or "%s-%04d" % (path.stem, counter)
        doc = MarkedDocument(
            meta=DocumentMeta(
                doc_id=doc_id,
                source_lang=_tuv_lang(source),
                target_lang=_tuv_lang(target),
            ),
            plain_text=_seg_text(target),
            source_text=_seg_text(source),
            annotations=(),
        )
        corpus = put_document(corpus, doc)
        doc_ids.append(doc_id)
    return corpus, doc_ids
