"""Bidirectional conversion between inline mistake markup and the stand-off model.

The dialect is mixed-content text with tag pairs like
``<content_mistake weight='minor'>...</content_mistake>``.  A tag carries a
category (the tag name), a required severity attribute, and optionally a
``note`` attribute with the critic's remark, nothing presentational.
Parsing strips the tags into span annotations; serializing puts them back.
``.tqm`` files are UTF-8, LF newlines, no BOM.

Escaping: output escapes ``&`` and ``<`` in text (as ``&amp;`` / ``&lt;``)
and additionally ``'`` (as ``&apos;``) inside attribute values; input
accepts the five named entities ``&amp; &lt; &gt; &apos; &quot;``.  A
literal ``>`` is accepted on input.  Numeric character references are not
supported.

Diagnostic offsets point at the offending character of the raw input:
the tag name for UnknownTag, the ``<`` of the tag for
MissingSeverityAttribute and UnbalancedTags, the attribute value for
BadSeverityValue, the stray character itself for MalformedTag/BadEscape.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .document import (
    Annotation,
    DocumentMeta,
    MarkedDocument,
    annotation_forest,
    validate_document,
)
from .errors import InvalidDocument, MarkupSyntaxError
from .taxonomy import SEVERITY_ORDER, Severity, Taxonomy, is_name_char, is_name_start

_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "apos": "'", "quot": '"'}
_MAX_ENTITY_NAME = 8


class DiagnosticKind(str, Enum):
    MALFORMED_TAG = "MalformedTag"
    UNKNOWN_TAG = "UnknownTag"
    MISSING_SEVERITY_ATTRIBUTE = "MissingSeverityAttribute"
    BAD_SEVERITY_VALUE = "BadSeverityValue"
    UNBALANCED_TAGS = "UnbalancedTags"
    BAD_ESCAPE = "BadEscape"


@dataclass(frozen=True)
class ParseDiagnostic:
    """One markup problem: what kind, where in the raw input, and why."""

    kind: DiagnosticKind
    offset: int
    message: str


def escape_text(text: str) -> str:
    """Escape for dialect text content: only '&' and '<' need escaping."""
    return text.replace("&", "&amp;").replace("<", "&lt;")


def escape_attribute(value: str) -> str:
    """Escape for a single-quoted attribute value.

    '>' is escaped here (though legal bare) so a serialized tag never
    contains one; naive tag-stripping tools then survive note text.
    """
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace("'", "&apos;")
    )


# --- tokenizer -------------------------------------------------------------

@dataclass(frozen=True)
class _Attr:
    name: str
    name_offset: int
    value: str  # entity escapes resolved
    value_offset: int


@dataclass(frozen=True)
class _Token:
    kind: str  # "text" | "entity" | "start" | "end"
    start: int
    end: int
    name: str = ""
    name_offset: int = -1
    attrs: tuple = ()
    value: str = ""  # entities only: the resolved character


def _tokenize(text: str) -> tuple[list[_Token], list[ParseDiagnostic]]:
    tokens: list[_Token] = []
    diagnostics: list[ParseDiagnostic] = []
    n = len(text)
    pos = 0
    text_start = 0

    def flush(upto: int) -> None:
        nonlocal text_start
        if upto > text_start:
            tokens.append(_Token("text", text_start, upto))
        text_start = upto

    def diag(kind: DiagnosticKind, offset: int, message: str) -> None:
        diagnostics.append(ParseDiagnostic(kind, offset, message))

    def read_name(i: int) -> tuple[str, int]:
        j = i + 1
        while j < n and is_name_char(text[j]):
            j += 1
        return text[i:j], j

    def skip_to_gt(i: int) -> int:
        while i < n and text[i] != ">":
            i += 1
        return min(i + 1, n)

    def unescape_value(raw: str, value_offset: int) -> str:
        out: list[str] = []
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch == "&":
                semi = raw.find(";", i + 1, i + 2 + _MAX_ENTITY_NAME)
                entity = raw[i + 1 : semi] if semi > 0 else None
                if entity in _ENTITIES:
                    out.append(_ENTITIES[entity])
                    i = semi + 1
                    continue
                diag(
                    DiagnosticKind.BAD_ESCAPE,
                    value_offset + i,
                    "bad escape in attribute value; use &amp; for a literal '&'",
                )
            out.append(ch)
            i += 1
        return "".join(out)

    def read_tag(lt: int, closing: bool) -> int:
        i = lt + (2 if closing else 1)
        name_offset = i
        name, i = read_name(i)
        attrs: list[_Attr] = []
        seen_attrs: set[str] = set()
        while True:
            while i < n and text[i].isspace():
                i += 1
            if i >= n:
                diag(DiagnosticKind.MALFORMED_TAG, lt, "tag is never closed with '>'")
                return n
            ch = text[i]
            if ch == ">":
                i += 1
                break
            if closing:
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    i,
                    "unexpected character %r in end tag" % ch,
                )
                return skip_to_gt(i)
            if not is_name_start(ch):
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    i,
                    "unexpected character %r in tag" % ch,
                )
                return skip_to_gt(i)
            attr_offset = i
            attr_name, i = read_name(i)
            while i < n and text[i].isspace():
                i += 1
            if i >= n or text[i] != "=":
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    attr_offset,
                    "attribute %r has no value" % attr_name,
                )
                return skip_to_gt(i)
            i += 1
            while i < n and text[i].isspace():
                i += 1
            if i >= n or text[i] not in "'\"":
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    min(i, n - 1),
                    "attribute %r: value must be quoted" % attr_name,
                )
                return skip_to_gt(i)
            quote = text[i]
            value_offset = i + 1
            close = text.find(quote, value_offset)
            if close < 0:
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    i,
                    "attribute %r: unterminated value" % attr_name,
                )
                return n
            value = unescape_value(text[value_offset:close], value_offset)
            i = close + 1
            if attr_name in seen_attrs:
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    attr_offset,
                    "duplicate attribute %r" % attr_name,
                )
                continue
            seen_attrs.add(attr_name)
            attrs.append(_Attr(attr_name, attr_offset, value, value_offset))
        tokens.append(
            _Token(
                "end" if closing else "start",
                lt,
                i,
                name=name,
                name_offset=name_offset,
                attrs=tuple(attrs),
            )
        )
        return i

    while pos < n:
        ch = text[pos]
        if ch == "<":
            j = pos + 1
            closing = j < n and text[j] == "/"
            k = j + 1 if closing else j
            if k < n and is_name_start(text[k]):
                flush(pos)
                pos = read_tag(pos, closing)
                text_start = pos
            else:
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    pos,
                    "stray '<' in text; escape it as &lt;",
                )
                pos += 1  # keep it as literal text
        elif ch == "&":
            semi = text.find(";", pos + 1, pos + 2 + _MAX_ENTITY_NAME)
            entity = text[pos + 1 : semi] if semi > 0 else None
            if entity in _ENTITIES:
                flush(pos)
                tokens.append(_Token("entity", pos, semi + 1, value=_ENTITIES[entity]))
                pos = semi + 1
                text_start = pos
            else:
                diag(
                    DiagnosticKind.BAD_ESCAPE,
                    pos,
                    "bad escape; use &amp; for a literal '&'",
                )
                pos += 1  # keep it as literal text
        else:
            pos += 1
    flush(n)
    return tokens, diagnostics


# --- parsing ---------------------------------------------------------------

@dataclass
class _OpenTag:
    name: str
    category_id: str | None
    severity: Severity | None
    note: str | None
    plain_start: int
    tag_offset: int
    order: int


def parse(
    marked_text: str,
    taxonomy: Taxonomy,
    *,
    meta: DocumentMeta | None = None,
    source_text: str | None = None,
    permissive_attributes: bool = False,
) -> MarkedDocument:
    """Parse inline markup into a MarkedDocument.

    The resulting plain text is the input with tags removed and entity
    escapes resolved; each balanced tag pair becomes one annotation whose
    span covers exactly the enclosed text.  On any problem the whole input
    is rejected: MarkupSyntaxError carries every diagnostic and no partial
    document is ever produced.

    With ``permissive_attributes`` unknown attributes on known tags are
    ignored instead of diagnosed (strict is the default so annotator typos
    like ``wieght=`` get caught).
    """
    tokens, diagnostics = _tokenize(marked_text)

    plain_parts: list[str] = []
    plain_len = 0
    stack: list[_OpenTag] = []
    completed: list[_OpenTag] = []
    spans: dict[int, tuple[int, int]] = {}
    order = 0

    def diag(kind: DiagnosticKind, offset: int, message: str) -> None:
        diagnostics.append(ParseDiagnostic(kind, offset, message))

    for tok in tokens:
        if tok.kind == "text":
            piece = marked_text[tok.start : tok.end]
            plain_parts.append(piece)
            plain_len += len(piece)
        elif tok.kind == "entity":
            plain_parts.append(tok.value)
            plain_len += 1
        elif tok.kind == "start":
            category = taxonomy.category_by_tag(tok.name)
            if category is None:
                diag(
                    DiagnosticKind.UNKNOWN_TAG,
                    tok.name_offset,
                    "tag %r is not declared by taxonomy %r" % (tok.name, taxonomy.name),
                )
            severity = None
            note = None
            saw_severity = False
            for attr in tok.attrs:
                if attr.name == taxonomy.severity_attribute:
                    saw_severity = True
                    try:
                        severity = Severity(attr.value)
                    except ValueError:
                        diag(
                            DiagnosticKind.BAD_SEVERITY_VALUE,
                            attr.value_offset,
                            "%r is not a severity (expected minor, major or critical)"
                            % attr.value,
                        )
                        continue
                    if category is not None and severity not in category.allowed_severities:
                        diag(
                            DiagnosticKind.BAD_SEVERITY_VALUE,
                            attr.value_offset,
                            "severity %r is not allowed for %r" % (attr.value, tok.name),
                        )
                elif attr.name == "note":
                    note = attr.value
                elif not permissive_attributes:
                    diag(
                        DiagnosticKind.MALFORMED_TAG,
                        attr.name_offset,
                        "unexpected attribute %r on %r" % (attr.name, tok.name),
                    )
            if not saw_severity:
                diag(
                    DiagnosticKind.MISSING_SEVERITY_ATTRIBUTE,
                    tok.start,
                    "tag %r lacks the required %r attribute"
                    % (tok.name, taxonomy.severity_attribute),
                )
            stack.append(
                _OpenTag(
                    name=tok.name,
                    category_id=category.id if category else None,
                    severity=severity,
                    note=note,
                    plain_start=plain_len,
                    tag_offset=tok.start,
                    order=order,
                )
            )
            order += 1
        else:  # end tag
            if not stack:
                diag(
                    DiagnosticKind.UNBALANCED_TAGS,
                    tok.start,
                    "end tag </%s> has no matching start tag" % tok.name,
                )
                continue
            top = stack[-1]
            if top.name != tok.name:
                diag(
                    DiagnosticKind.UNBALANCED_TAGS,
                    tok.start,
                    "end tag </%s> does not match open <%s>" % (tok.name, top.name),
                )
                continue
            stack.pop()
            if plain_len == top.plain_start:
                diag(
                    DiagnosticKind.MALFORMED_TAG,
                    tok.start,
                    "tag pair <%s> encloses no text (empty spans are forbidden)" % tok.name,
                )
                continue
            spans[top.order] = (top.plain_start, plain_len)
            completed.append(top)

    for frame in stack:
        diag(
            DiagnosticKind.UNBALANCED_TAGS,
            frame.tag_offset,
            "start tag <%s> is never closed" % frame.name,
        )

    if diagnostics:
        diagnostics.sort(key=lambda d: d.offset)
        raise MarkupSyntaxError(diagnostics)

    completed.sort(key=lambda frame: frame.order)
    annotations = tuple(
        Annotation(
            id="a%d" % (i + 1),  # ids follow document order of the start tags
            category_id=frame.category_id,
            severity=frame.severity,
            start=spans[frame.order][0],
            end=spans[frame.order][1],
            note=frame.note,
        )
        for i, frame in enumerate(completed)
    )
    return MarkedDocument(
        meta=meta if meta is not None else DocumentMeta(doc_id="untitled"),
        plain_text="".join(plain_parts),
        source_text=source_text,
        annotations=annotations,
    )


# --- serialization ---------------------------------------------------------

def _start_tag(annotation: Annotation, taxonomy: Taxonomy) -> str:
    category = taxonomy.category_by_id(annotation.category_id)
    parts = [
        category.tag_name,
        "%s='%s'" % (taxonomy.severity_attribute, annotation.severity.value),
    ]
    if annotation.note is not None:
        parts.append("note='%s'" % escape_attribute(annotation.note))
    return "<%s>" % " ".join(parts)


def serialize(doc: MarkedDocument, taxonomy: Taxonomy) -> str:
    """Emit plain text with inline tags at annotation boundaries.

    Output is canonical: single-quoted attributes, '&' and '<' escaped,
    and at equal start offsets the longer span opens first, so equal inputs
    always produce byte-identical output.
    """
    violations = validate_document(doc, taxonomy)
    if violations:
        raise InvalidDocument("; ".join(v.message for v in violations))

    text = doc.plain_text
    out: list[str] = []

    def emit(nodes, lo: int, hi: int) -> None:
        pos = lo
        for node in nodes:
            ann = node.annotation
            out.append(escape_text(text[pos : ann.start]))
            out.append(_start_tag(ann, taxonomy))
            emit(node.children, ann.start, ann.end)
            out.append("</%s>" % taxonomy.category_by_id(ann.category_id).tag_name)
            pos = ann.end
        out.append(escape_text(text[pos:hi]))

    emit(annotation_forest(doc.annotations), 0, len(text))
    return "".join(out)


def canonicalize(marked_text: str) -> str:
    """Rewrite tags into canonical form (single quotes, single spacing).

    Text and entities are copied verbatim; only tag tokens are rebuilt,
    with attribute values re-escaped for single quoting.  Raises
    MarkupSyntaxError when the input does not even tokenize.
    """
    tokens, diagnostics = _tokenize(marked_text)
    if diagnostics:
        raise MarkupSyntaxError(diagnostics)
    out: list[str] = []
    for tok in tokens:
        if tok.kind in ("text", "entity"):
            out.append(marked_text[tok.start : tok.end])
        elif tok.kind == "start":
            parts = [tok.name]
            parts.extend(
                "%s='%s'" % (attr.name, escape_attribute(attr.value)) for attr in tok.attrs
            )
            out.append("<%s>" % " ".join(parts))
        else:
            out.append("</%s>" % tok.name)
    return "".join(out)


def roundtrip_check(marked_text: str, taxonomy: Taxonomy) -> bool:
    """True iff the input is already in canonical serialized form.

    Parses, re-serializes, and compares against the canonicalized input
    (attribute quoting normalized).  Parse failures propagate.
    """
    doc = parse(marked_text, taxonomy)
    return serialize(doc, taxonomy) == canonicalize(marked_text)


# --- schema export ---------------------------------------------------------

def export_dtd(taxonomy: Taxonomy) -> str:
    """Emit a DTD declaring each category tag as mixed content.

    Every element admits text and any mistake tag (nesting is legal), and
    requires the severity attribute restricted to the category's allowed
    values.  Order follows the taxonomy's category list.
    """
    names = [c.tag_name for c in taxonomy.categories]
    mixed = " | ".join(["#PCDATA"] + names)
    lines = []
    for category in taxonomy.categories:
        lines.append("<!ELEMENT %s (%s)*>" % (category.tag_name, mixed))
        allowed = "|".join(
            s.value for s in SEVERITY_ORDER if s in category.allowed_severities
        )
        lines.append(
            "<!ATTLIST %s %s (%s) #REQUIRED>"
            % (category.tag_name, taxonomy.severity_attribute, allowed)
        )
        lines.append("<!ATTLIST %s note CDATA #IMPLIED>" % category.tag_name)
    return "\n".join(lines) + ("\n" if lines else "")
