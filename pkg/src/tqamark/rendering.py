"""Configurable visual representations of a marked document.

A representation never changes the text; it only decides which annotations
get wrapped and how the wrappers look.  Style semantics live here and in the
stylesheet, never in the document itself.
"""

from __future__ import annotations

import html
from dataclasses import dataclass, field
from enum import Enum

from .document import MarkedDocument, annotation_forest, validate_document
from .errors import InvalidDocument, UnknownRepresentationFields
from .taxonomy import SEVERITY_ORDER, Severity, Taxonomy


class Color(str, Enum):
    """Fixed background-color palette."""

    GREEN = "green"
    YELLOW = "yellow"
    RED = "red"
    NONE = "none"


class Mode(str, Enum):
    HTML = "html"
    ANSI = "ansi"
    PLAIN = "plain"


#: CSS background values behind the palette tokens.
CSS_BACKGROUNDS = {
    Color.GREEN: "#b7eb8f",
    Color.YELLOW: "#ffe58f",
    Color.RED: "#ffa39e",
}

#: ECMA-48 SGR background codes (bold is code 1, reset is 0).
ANSI_BACKGROUNDS = {
    Color.GREEN: 42,
    Color.YELLOW: 43,
    Color.RED: 41,
}

_RESET = "\x1b[0m"


@dataclass(frozen=True)
class Style:
    color: Color = Color.NONE
    bold: bool = False

    def to_dict(self) -> dict:
        return {"color": self.color.value, "bold": self.bold}

    @classmethod
    def from_dict(cls, d: dict) -> "Style":
        return cls(color=Color(d.get("color", "none")), bold=bool(d.get("bold", False)))


#: minor green, major yellow, critical red; every mistake in bold.
DEFAULT_STYLE_MAP = {
    Severity.MINOR: Style(Color.GREEN, bold=True),
    Severity.MAJOR: Style(Color.YELLOW, bold=True),
    Severity.CRITICAL: Style(Color.RED, bold=True),
}


@dataclass(frozen=True)
class Representation:
    """Named rendering configuration: filters, style mapping, output mode.

    include_categories / include_severities of None mean "everything"; an
    empty set means "nothing passes the filter".  category_styles override
    the per-severity style for annotations of that category.
    """

    name: str
    include_categories: frozenset | None = None
    include_severities: frozenset | None = None
    style_map: dict = field(default_factory=lambda: dict(DEFAULT_STYLE_MAP))
    category_styles: dict = field(default_factory=dict)
    mode: Mode = Mode.HTML

    def __post_init__(self):
        if not self.name:
            raise ValueError("representation name must be non-empty")
        if self.include_categories is not None:
            object.__setattr__(self, "include_categories", frozenset(self.include_categories))
        if self.include_severities is not None:
            object.__setattr__(self, "include_severities", frozenset(self.include_severities))

    def admits(self, category_id: str, severity: Severity) -> bool:
        if self.include_categories is not None and category_id not in self.include_categories:
            return False
        if self.include_severities is not None and severity not in self.include_severities:
            return False
        return True

    def style_for(self, category_id: str, severity: Severity) -> Style:
        override = self.category_styles.get(category_id)
        if override is not None:
            return override
        return self.style_map.get(severity, Style())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "include_categories": (
                None if self.include_categories is None else sorted(self.include_categories)
            ),
            "include_severities": (
                None
                if self.include_severities is None
                else [s.value for s in SEVERITY_ORDER if s in self.include_severities]
            ),
            "style_map": {s.value: st.to_dict() for s, st in sorted(
                self.style_map.items(), key=lambda kv: kv[0].rank)},
            "category_styles": {
                cid: st.to_dict() for cid, st in sorted(self.category_styles.items())
            },
            "mode": self.mode.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Representation":
        categories = d.get("include_categories")
        severities = d.get("include_severities")
        style_map = dict(DEFAULT_STYLE_MAP)
        for name, spec in d.get("style_map", {}).items():
            style_map[Severity.from_str(name)] = Style.from_dict(spec)
        return cls(
            name=d["name"],
            include_categories=None if categories is None else frozenset(categories),
            include_severities=(
                None
                if severities is None
                else frozenset(Severity.from_str(s) for s in severities)
            ),
            style_map=style_map,
            category_styles={
                cid: Style.from_dict(spec) for cid, spec in d.get("category_styles", {}).items()
            },
            mode=Mode(d.get("mode", "html")),
        )


def builtin_representations() -> dict:
    """The three stock representations every install understands."""
    return {
        "severity-highlight": Representation(name="severity-highlight"),
        "critical-only": Representation(
            name="critical-only",
            include_severities=frozenset({Severity.CRITICAL}),
        ),
        "plain": Representation(
            name="plain",
            include_severities=frozenset(),
            mode=Mode.PLAIN,
        ),
    }


def _check_fields(representation: Representation, taxonomy: Taxonomy) -> None:
    known = set(taxonomy.category_ids)
    referenced = set(representation.category_styles)
    if representation.include_categories is not None:
        referenced |= representation.include_categories
    unknown = sorted(referenced - known)
    if unknown:
        raise UnknownRepresentationFields(
            "representation %r names unknown categories: %s"
            % (representation.name, ", ".join(unknown))
        )


def _sgr(style: Style) -> str:
    codes = []
    if style.bold:
        codes.append(1)
    background = ANSI_BACKGROUNDS.get(style.color)
    if background is not None:
        codes.append(background)
    if not codes:
        return ""
    return "\x1b[%sm" % ";".join(str(c) for c in codes)


def render(
    doc: MarkedDocument,
    taxonomy: Taxonomy,
    representation: Representation,
    mode: Mode | None = None,
) -> str:
    """Render doc under the representation; mode overrides the configured one.

    Every text character is emitted exactly once, in order; annotations
    failing the filter leave no trace in the output.
    """
    violations = validate_document(doc, taxonomy)
    if violations:
        raise InvalidDocument("; ".join(v.message for v in violations))
    _check_fields(representation, taxonomy)
    mode = representation.mode if mode is None else mode

    if mode is Mode.PLAIN:
        return doc.plain_text

    admitted = [a for a in doc.annotations if representation.admits(a.category_id, a.severity)]
    forest = annotation_forest(admitted)
    out: list = []
    text = doc.plain_text

    if mode is Mode.HTML:
        def emit(nodes, lo, hi):
            pos = lo
            for node in nodes:
                ann = node.annotation
                out.append(html.escape(text[pos:ann.start], quote=False))
                out.append(
                    '<span class="mistake cat-%s sev-%s">' % (ann.category_id, ann.severity.value)
                )
                emit(node.children, ann.start, ann.end)
                out.append("</span>")
                pos = ann.end
            out.append(html.escape(text[pos:hi], quote=False))

        emit(forest, 0, len(text))
        return "".join(out)

    # ansi: reset-and-reapply so the innermost style wins outright
    def emit_ansi(nodes, lo, hi, enclosing: str):
        pos = lo
        for node in nodes:
            ann = node.annotation
            out.append(text[pos:ann.start])
            style = _sgr(representation.style_for(ann.category_id, ann.severity))
            out.append((_RESET + style) if enclosing else style)
            emit_ansi(node.children, ann.start, ann.end, style)
            out.append(_RESET + enclosing)
            pos = ann.end
        out.append(text[pos:hi])

    emit_ansi(forest, 0, len(text), "")
    return "".join(out)


def default_stylesheet() -> str:
    """Companion stylesheet for html-mode output."""
    lines = [
        "/* highlight styles for marked translation mistakes */",
        ".mistake {",
        "  border-radius: 2px;",
        "}",
    ]
    for severity in SEVERITY_ORDER:
        style = DEFAULT_STYLE_MAP[severity]
        lines.append(".sev-%s {" % severity.value)
        lines.append(
            "  background-color: %s; /* %s */" % (CSS_BACKGROUNDS[style.color], style.color.value)
        )
        if style.bold:
            lines.append("  font-weight: bold;")
        lines.append("}")
    return "\n".join(lines) + "\n"
