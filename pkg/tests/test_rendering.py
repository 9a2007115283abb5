import random
import re

import pytest

import tqamark as tq
from tqamark import Color, Mode, Representation, Severity, Style
from tqamark.rendering import default_stylesheet

from genutil import generate_document

ANSI_RE = re.compile(r"\x1b\[[0-9;]*m")
TAG_RE = re.compile(r"</?span[^>]*>")


def strip_html(fragment: str) -> str:
    return (
        TAG_RE.sub("", fragment)
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
    )


def doc_with(text, *spans):
    annotations = tuple(
        tq.Annotation(
            id="a%d" % (i + 1), category_id=cat, severity=sev, start=s, end=e,
        )
        for i, (cat, sev, s, e) in enumerate(spans)
    )
    return tq.MarkedDocument(
        meta=tq.DocumentMeta(doc_id="r"), plain_text=text, annotations=annotations
    )


class TestRepresentation:
    def test_name_required(self):
        with pytest.raises(ValueError):
            Representation(name="")

    def test_none_filter_admits_everything(self):
        rep = Representation(name="all")
        assert rep.admits("content", Severity.MINOR)
        assert rep.admits("whatever", Severity.CRITICAL)

    def test_empty_filter_admits_nothing(self):
        rep = Representation(name="none", include_severities=frozenset())
        assert not rep.admits("content", Severity.CRITICAL)

    def test_category_style_override(self):
        rep = Representation(
            name="x", category_styles={"style": Style(Color.RED, bold=False)}
        )
        assert rep.style_for("style", Severity.MINOR) == Style(Color.RED, bold=False)
        assert rep.style_for("content", Severity.MINOR) == Style(Color.GREEN, bold=True)

    def test_dict_round_trip(self):
        rep = Representation(
            name="custom",
            include_categories=frozenset({"content"}),
            include_severities=frozenset({Severity.MINOR, Severity.CRITICAL}),
            category_styles={"content": Style(Color.YELLOW, bold=False)},
            mode=Mode.ANSI,
        )
        assert Representation.from_dict(rep.to_dict()) == rep


class TestHtml:
    def test_single_span_classes(self, taxonomy):
        doc = doc_with("ab cd ef", ("form", Severity.MAJOR, 3, 5))
        rep = Representation(name="all")
        assert tq.render(doc, taxonomy, rep) == (
            'ab <span class="mistake cat-form sev-major">cd</span> ef'
        )

    def test_escaping(self, taxonomy):
        doc = doc_with("a & b < c > d", ("content", Severity.MINOR, 0, 5))
        out = tq.render(doc, taxonomy, Representation(name="all"))
        assert out == (
            '<span class="mistake cat-content sev-minor">a &amp; b</span> &lt; c &gt; d'
        )

    def test_nested_wrappers_nest_properly(self, taxonomy):
        doc = doc_with(
            "abcdef",
            ("content", Severity.MINOR, 0, 6),
            ("style", Severity.CRITICAL, 2, 4),
        )
        out = tq.render(doc, taxonomy, Representation(name="all"))
        assert out == (
            '<span class="mistake cat-content sev-minor">ab'
            '<span class="mistake cat-style sev-critical">cd</span>ef</span>'
        )

    def test_filtered_out_leaves_no_trace(self, taxonomy):
        doc = doc_with("abcdef", ("content", Severity.MINOR, 2, 4))
        rep = Representation(name="crit", include_severities=frozenset({Severity.CRITICAL}))
        assert tq.render(doc, taxonomy, rep) == "abcdef"

    def test_unknown_category_in_filter(self, taxonomy):
        doc = doc_with("abcdef")
        rep = Representation(name="x", include_categories=frozenset({"spelling"}))
        with pytest.raises(tq.UnknownRepresentationFields):
            tq.render(doc, taxonomy, rep)

    def test_unknown_category_in_style_override(self, taxonomy):
        doc = doc_with("abcdef")
        rep = Representation(name="x", category_styles={"spelling": Style(Color.RED)})
        with pytest.raises(tq.UnknownRepresentationFields):
            tq.render(doc, taxonomy, rep)

    def test_invalid_document_refused(self, taxonomy):
        doc = doc_with(
            "0123456789",
            ("content", Severity.MINOR, 0, 5),
            ("form", Severity.MINOR, 3, 8),
        )
        with pytest.raises(tq.InvalidDocument):
            tq.render(doc, taxonomy, Representation(name="all"))


class TestAnsi:
    def test_single_critical_span(self, taxonomy):
        doc = doc_with("ab cd ef", ("style", Severity.CRITICAL, 3, 5))
        out = tq.render(doc, taxonomy, Representation(name="all", mode=Mode.ANSI))
        assert out == "ab \x1b[1;41mcd\x1b[0m ef"

    def test_inner_style_wins(self, taxonomy):
        doc = doc_with(
            "abcdef",
            ("content", Severity.MINOR, 0, 6),
            ("style", Severity.CRITICAL, 2, 4),
        )
        out = tq.render(doc, taxonomy, Representation(name="all", mode=Mode.ANSI))
        assert out == (
            "\x1b[1;42mab\x1b[0m\x1b[1;41mcd\x1b[0m\x1b[1;42mef\x1b[0m"
        )

    def test_text_is_not_escaped(self, taxonomy):
        doc = doc_with("a & b < c", ("content", Severity.MINOR, 0, 5))
        out = tq.render(doc, taxonomy, Representation(name="all", mode=Mode.ANSI))
        assert ANSI_RE.sub("", out) == "a & b < c"


class TestModes:
    def test_plain_is_identity(self, taxonomy, s5_doc):
        rep = Representation(name="p", mode=Mode.PLAIN)
        assert tq.render(s5_doc, taxonomy, rep) == s5_doc.plain_text

    def test_mode_override(self, taxonomy, s5_doc):
        rep = Representation(name="all")  # html configured
        out = tq.render(s5_doc, taxonomy, rep, mode=Mode.ANSI)
        assert "\x1b[" in out and "<span" not in out

    def test_text_preserved_across_generated_documents(self, taxonomy):
        rng = random.Random(3)
        rep = Representation(name="all")
        for _ in range(40):
            doc = generate_document(rng, taxonomy=taxonomy)
            html = tq.render(doc, taxonomy, rep, mode=Mode.HTML)
            ansi = tq.render(doc, taxonomy, rep, mode=Mode.ANSI)
            assert strip_html(html) == doc.plain_text
            assert ANSI_RE.sub("", ansi) == doc.plain_text
            assert tq.render(doc, taxonomy, rep, mode=Mode.PLAIN) == doc.plain_text

    def test_rendering_is_deterministic(self, taxonomy, s5_doc, config):
        rep = config.representation("severity-highlight")
        assert tq.render(s5_doc, taxonomy, rep) == tq.render(s5_doc, taxonomy, rep)


class TestBuiltins:
    def test_severity_highlight_wraps_both(self, taxonomy, s5_doc, config):
        out = tq.render(s5_doc, taxonomy, config.representation("severity-highlight"))
        assert out.count("sev-critical") == 1
        assert out.count("sev-minor") == 1

    def test_critical_only(self, taxonomy, s5_doc, config):
        out = tq.render(s5_doc, taxonomy, config.representation("critical-only"))
        assert out.count("sev-critical") == 1
        assert out.count("sev-minor") == 0

    def test_plain_builtin(self, taxonomy, s5_doc, config):
        assert (
            tq.render(s5_doc, taxonomy, config.representation("plain"))
            == s5_doc.plain_text
        )


class TestStylesheet:
    # frozen after checking the emitted text against the CSS core grammar
    EXPECTED = (
        "/* highlight styles for marked translation mistakes */\n"
        ".mistake {\n"
        "  border-radius: 2px;\n"
        "}\n"
        ".sev-minor {\n"
        "  background-color: #b7eb8f; /* green */\n"
        "  font-weight: bold;\n"
        "}\n"
        ".sev-major {\n"
        "  background-color: #ffe58f; /* yellow */\n"
        "  font-weight: bold;\n"
        "}\n"
        ".sev-critical {\n"
        "  background-color: #ffa39e; /* red */\n"
        "  font-weight: bold;\n"
        "}\n"
    )

    def test_frozen_stylesheet(self):
        assert default_stylesheet() == self.EXPECTED

    def test_severity_classes_present(self):
        css = default_stylesheet()
        assert ".sev-critical" in css and "#ffa39e" in css  # red background
        assert ".sev-minor" in css and "#b7eb8f" in css  # green background
        assert "font-weight: bold" in css

    def test_structurally_valid(self):
        # conservative grammar: comments, then `selector { prop: value; ... }`
        css = re.sub(r"/\*.*?\*/", "", default_stylesheet(), flags=re.S)
        assert css.count("{") == css.count("}")
        for match in re.finditer(r"([^{}]+)\{([^{}]*)\}", css):
            selector, body = match.groups()
            assert selector.strip()
            for declaration in filter(None, (d.strip() for d in body.split(";"))):
                prop, _, value = declaration.partition(":")
                assert prop.strip() and value.strip(), declaration
