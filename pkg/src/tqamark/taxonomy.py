"""Mistake taxonomy: the configurable tag dialect an organization assesses with.

A taxonomy declares which mistake categories exist, which inline tag each
category uses, and which severities a category accepts.  Tags describe what
a text region *is* (a mistake of some kind), never how it should look.
"""

from dataclasses import dataclass, field
from enum import Enum


class Severity(str, Enum):
    """The value axis of a mistake.  Ordering is total: minor < major < critical."""

    MINOR = "minor"
    MAJOR = "major"
    CRITICAL = "critical"

    @property
    def rank(self) -> int:
        return _SEVERITY_RANK[self]

    # all four spelled out: the str base would otherwise compare alphabetically
    def __lt__(self, other):
        if not isinstance(other, Severity):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other):
        if not isinstance(other, Severity):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other):
        if not isinstance(other, Severity):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other):
        if not isinstance(other, Severity):
            return NotImplemented
        return self.rank >= other.rank

    @classmethod
    def from_str(cls, value: str) -> "Severity":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(
                "unknown severity %r (expected one of: %s)"
                % (value, ", ".join(s.value for s in cls))
            ) from None


_SEVERITY_RANK = {Severity.MINOR: 0, Severity.MAJOR: 1, Severity.CRITICAL: 2}

#: All severities, lowest first.
SEVERITY_ORDER = (Severity.MINOR, Severity.MAJOR, Severity.CRITICAL)


def is_name_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_-"


def is_valid_name(name: str) -> bool:
    """Tag/attribute name syntax: letter or underscore, then letters, digits, '_', '-'."""
    if not name or not is_name_start(name[0]):
        return False
    return all(is_name_char(ch) for ch in name[1:])


@dataclass(frozen=True)
class MistakeCategory:
    """One mistake type: its identifier, tag name, and accepted severities."""

    id: str
    tag_name: str
    label: str = ""
    description: str = ""
    allowed_severities: frozenset = frozenset(SEVERITY_ORDER)

    def __post_init__(self):
        if not self.id:
            raise ValueError("category id must be non-empty")
        if not is_valid_name(self.tag_name):
            raise ValueError("invalid tag name %r" % (self.tag_name,))
        if not self.allowed_severities:
            raise ValueError("category %r allows no severities" % (self.id,))
        object.__setattr__(self, "allowed_severities", frozenset(self.allowed_severities))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "tag_name": self.tag_name,
            "label": self.label,
            "description": self.description,
            "allowed_severities": [s.value for s in SEVERITY_ORDER if s in self.allowed_severities],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MistakeCategory":
        severities = d.get("allowed_severities")  # omitted means all
        return cls(
            id=d["id"],
            tag_name=d["tag_name"],
            label=d.get("label", ""),
            description=d.get("description", ""),
            allowed_severities=(
                frozenset(SEVERITY_ORDER)
                if severities is None
                else frozenset(Severity.from_str(s) for s in severities)
            ),
        )


@dataclass(frozen=True)
class Taxonomy:
    """An ordered set of mistake categories plus the severity attribute name."""

    name: str
    categories: tuple = ()
    version: str = "1"
    severity_attribute: str = "weight"

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))
        if not is_valid_name(self.severity_attribute):
            raise ValueError("invalid severity attribute name %r" % (self.severity_attribute,))
        ids = [c.id for c in self.categories]
        if len(set(ids)) != len(ids):
            raise ValueError("category ids must be pairwise distinct")
        tags = [c.tag_name for c in self.categories]
        if len(set(tags)) != len(tags):
            raise ValueError("category tag names must be pairwise distinct")

    def category_by_id(self, category_id: str):
        for cat in self.categories:
            if cat.id == category_id:
                return cat
        return None

    def category_by_tag(self, tag_name: str):
        for cat in self.categories:
            if cat.tag_name == tag_name:
                return cat
        return None

    @property
    def category_ids(self) -> tuple:
        return tuple(c.id for c in self.categories)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "version": self.version,
            "severity_attribute": self.severity_attribute,
            "categories": [c.to_dict() for c in self.categories],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Taxonomy":
        return cls(
            name=d["name"],
            version=str(d.get("version", "1")),
            severity_attribute=d.get("severity_attribute", "weight"),
            categories=tuple(MistakeCategory.from_dict(c) for c in d["categories"]),
        )


def default_taxonomy() -> Taxonomy:
    """Three-category default: content, form and style mistakes."""
    return Taxonomy(
        name="default",
        version="1",
        severity_attribute="weight",
        categories=(
            MistakeCategory(
                id="content",
                tag_name="content_mistake",
                label="Content mistake",
                description="Distortion of factual or communicative information.",
            ),
            MistakeCategory(
                id="form",
                tag_name="form_mistake",
                label="Form mistake",
                description="Violation of target-language standards.",
            ),
            MistakeCategory(
                id="style",
                tag_name="style_mistake",
                label="Style mistake",
                description="Incorrect transmission of stylistic devices.",
            ),
        ),
    )
