"""Error points, Translation Quality Index and grade assignment.

All arithmetic is exact (fractions.Fraction); rounding happens once, as an
explicit display step controlled by the rounding mode.  The index is
100 minus the error-points-per-word percentage, clamped at 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .document import MarkedDocument, validate_document, word_count
from .errors import EmptyText, InvalidDocument, UnknownRoundingMode, ZeroWords
from .taxonomy import SEVERITY_ORDER, Severity, Taxonomy


class RoundingMode(str, Enum):
    """How the exact index becomes the displayed number.

    exact-2dp rounds half-up to two decimals.  truncate-error-percentage
    floors the error percentage before subtracting, i.e.
    100 - floor(points/words * 100); with 4 points in 53 words that yields
    93 where exact evaluation gives 92.45.
    """

    EXACT_2DP = "exact-2dp"
    TRUNCATE = "truncate-error-percentage"

    @classmethod
    def from_str(cls, value: str) -> "RoundingMode":
        aliases = {"exact": cls.EXACT_2DP, "truncate": cls.TRUNCATE}
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError:
            raise UnknownRoundingMode(
                "unknown rounding mode %r (expected exact-2dp or truncate-error-percentage)"
                % (value,)
            ) from None


#: Default points per severity: minor=1, critical=3, major=2 (the midpoint).
DEFAULT_POINTS = {
    Severity.MINOR: Fraction(1),
    Severity.MAJOR: Fraction(2),
    Severity.CRITICAL: Fraction(3),
}


def as_points(value) -> Fraction:
    """Coerce a config value (int, float, '3', '1/2', '0.5') to a Fraction."""
    points = Fraction(str(value))
    if points < 0:
        raise ValueError("point values must be >= 0, got %s" % (value,))
    return points


def points_to_json(points: Fraction):
    return int(points) if points.denominator == 1 else "%d/%d" % (
        points.numerator,
        points.denominator,
    )


@dataclass(frozen=True)
class WeightConfig:
    """Error-point matrix: defaults per severity plus per-(category, severity) overrides."""

    default_points: dict = None
    overrides: dict = None  # (category_id, Severity) -> Fraction

    def __post_init__(self):
        defaults = dict(DEFAULT_POINTS if self.default_points is None else self.default_points)
        for severity in SEVERITY_ORDER:
            if severity not in defaults:
                raise ValueError("default points must cover %r" % severity.value)
            if defaults[severity] < 0:
                raise ValueError("point values must be >= 0")
        overrides = dict(self.overrides or {})
        for value in overrides.values():
            if value < 0:
                raise ValueError("point values must be >= 0")
        object.__setattr__(self, "default_points", defaults)
        object.__setattr__(self, "overrides", overrides)

    def points_for(self, category_id: str, severity: Severity) -> Fraction:
        override = self.overrides.get((category_id, severity))
        return override if override is not None else self.default_points[severity]

    def scaled(self, k: Fraction) -> "WeightConfig":
        return WeightConfig(
            default_points={s: p * k for s, p in self.default_points.items()},
            overrides={key: p * k for key, p in self.overrides.items()},
        )

    def to_dict(self) -> dict:
        grouped: dict = {}
        for (category_id, severity), points in self.overrides.items():
            grouped.setdefault(category_id, {})[severity.value] = points_to_json(points)
        return {
            "defaults": {s.value: points_to_json(self.default_points[s]) for s in SEVERITY_ORDER},
            "overrides": grouped,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WeightConfig":
        defaults = dict(DEFAULT_POINTS)
        for name, value in d.get("defaults", {}).items():
            defaults[Severity.from_str(name)] = as_points(value)
        overrides = {}
        for category_id, per_severity in d.get("overrides", {}).items():
            for name, value in per_severity.items():
                overrides[(category_id, Severity.from_str(name))] = as_points(value)
        return cls(default_points=defaults, overrides=overrides)


@dataclass(frozen=True)
class GradeBand:
    """Half-open TQI interval [lower, upper) carrying a grade label."""

    lower: Fraction
    upper: Fraction
    label: str


@dataclass(frozen=True)
class GradeScale:
    """Ordered bands partitioning [0, 100]; the top band is closed at 100."""

    name: str
    bands: tuple

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple(self.bands))
        if not self.name:
            raise ValueError("scale name must be non-empty")
        if not self.bands:
            raise ValueError("scale %r has no bands" % self.name)
        if self.bands[0].lower != 0:
            raise ValueError("scale %r: first band must start at 0" % self.name)
        if self.bands[-1].upper != 100:
            raise ValueError("scale %r: last band must end at 100" % self.name)
        for band in self.bands:
            if not band.lower < band.upper:
                raise ValueError(
                    "scale %r: band %r is empty or inverted" % (self.name, band.label)
                )
        for left, right in zip(self.bands, self.bands[1:]):
            if left.upper != right.lower:
                raise ValueError(
                    "scale %r: gap or overlap between %r and %r"
                    % (self.name, left.label, right.label)
                )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "bands": [
                {
                    "lower": points_to_json(b.lower),
                    "upper": points_to_json(b.upper),
                    "label": b.label,
                }
                for b in self.bands
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GradeScale":
        return cls(
            name=d["name"],
            bands=tuple(
                GradeBand(
                    lower=Fraction(str(b["lower"])),
                    upper=Fraction(str(b["upper"])),
                    label=b["label"],
                )
                for b in d["bands"]
            ),
        )


@dataclass(frozen=True)
class BreakdownEntry:
    category_id: str
    severity: Severity
    count: int
    points: Fraction


@dataclass(frozen=True)
class ScoreReport:
    """Everything the assessment produced for one document."""

    doc_id: str
    total_error_points: Fraction
    word_count: int
    tqi_exact: Fraction
    tqi_display: Fraction
    grade: str
    breakdown: tuple
    scale: str
    rounding_mode: RoundingMode


def error_points(doc: MarkedDocument, weights: WeightConfig) -> Fraction:
    """Sum of per-annotation points from the weight configuration."""
    return sum(
        (weights.points_for(a.category_id, a.severity) for a in doc.annotations),
        Fraction(0),
    )


def round_half_up_2dp(value: Fraction) -> Fraction:
    return Fraction(math.floor(value * 100 + Fraction(1, 2)), 100)


def tqi_exact(points: Fraction, words: int) -> Fraction:
    """Exact index: 100 - (points/words)*100, clamped below at 0."""
    if words == 0:
        raise ZeroWords("cannot score a document with zero words")
    return max(Fraction(0), 100 - Fraction(points, words) * 100)


def compute_tqi(points, words: int, mode: RoundingMode = RoundingMode.EXACT_2DP) -> Fraction:
    """Displayed index per rounding mode, as an exact rational."""
    points = Fraction(points)
    if points < 0:
        raise ValueError("points must be >= 0")
    exact = tqi_exact(points, words)
    if mode is RoundingMode.TRUNCATE:
        return Fraction(max(0, 100 - math.floor(Fraction(points, words) * 100)))
    return round_half_up_2dp(exact)


def assign_grade(tqi, scale: GradeScale) -> str:
    """Label of the band containing tqi (lower-inclusive; 100 belongs to the top band)."""
    tqi = Fraction(tqi)
    if not 0 <= tqi <= 100:
        raise ValueError("tqi %s outside [0, 100]" % tqi)
    for band in scale.bands:
        if band.lower <= tqi < band.upper:
            return band.label
    return scale.bands[-1].label  # only 100 falls through; top band is closed


def score(
    doc: MarkedDocument,
    taxonomy: Taxonomy,
    weights: WeightConfig,
    scale: GradeScale,
    mode: RoundingMode = RoundingMode.EXACT_2DP,
) -> ScoreReport:
    """Full assessment of one document: points, index, grade, breakdown."""
    violations = validate_document(doc, taxonomy)
    if violations:
        raise InvalidDocument("; ".join(v.message for v in violations))
    words = word_count(doc.plain_text)
    if words == 0:
        raise EmptyText("document %r has no words to score" % doc.meta.doc_id)

    grouped: dict = {}
    for ann in doc.annotations:
        key = (ann.category_id, ann.severity)
        count, points = grouped.get(key, (0, Fraction(0)))
        grouped[key] = (count + 1, points + weights.points_for(*key))

    category_order = {c.id: i for i, c in enumerate(taxonomy.categories)}
    breakdown = tuple(
        BreakdownEntry(category_id, severity, count, points)
        for (category_id, severity), (count, points) in sorted(
            grouped.items(),
            key=lambda item: (category_order.get(item[0][0], len(category_order)), item[0][1].rank),
        )
    )
    total = sum((entry.points for entry in breakdown), Fraction(0))
    display = compute_tqi(total, words, mode)
    return ScoreReport(
        doc_id=doc.meta.doc_id,
        total_error_points=total,
        word_count=words,
        tqi_exact=tqi_exact(total, words),
        tqi_display=display,
        grade=assign_grade(display, scale),
        breakdown=breakdown,
        scale=scale.name,
        rounding_mode=mode,
    )


# --- report serialization ----------------------------------------------------

def format_tqi(report: ScoreReport) -> str:
    """Human display: integer in truncate mode, two decimals otherwise."""
    if report.rounding_mode is RoundingMode.TRUNCATE:
        return str(int(report.tqi_display))
    hundredths = int(report.tqi_display * 100)  # display value is exact in hundredths
    return "%d.%02d" % divmod(hundredths, 100)


def report_to_dict(report: ScoreReport) -> dict:
    if report.rounding_mode is RoundingMode.TRUNCATE:
        display = int(report.tqi_display)
    else:
        display = float(report.tqi_display)
    return {
        "doc_id": report.doc_id,
        "word_count": report.word_count,
        "total_error_points": points_to_json(report.total_error_points),
        "tqi_exact": points_to_json(report.tqi_exact),
        "tqi_display": display,
        "grade": report.grade,
        "scale": report.scale,
        "rounding_mode": report.rounding_mode.value,
        "breakdown": [
            {
                "category_id": entry.category_id,
                "severity": entry.severity.value,
                "count": entry.count,
                "points": points_to_json(entry.points),
            }
            for entry in report.breakdown
        ],
    }


def encode_report(report: ScoreReport) -> str:
    """Canonical JSON for a report; the CLI and the service emit this byte-for-byte."""
    return json.dumps(report_to_dict(report), ensure_ascii=False, indent=2)


def report_from_dict(d: dict) -> ScoreReport:
    return ScoreReport(
        doc_id=d["doc_id"],
        total_error_points=Fraction(str(d["total_error_points"])),
        word_count=int(d["word_count"]),
        tqi_exact=Fraction(str(d["tqi_exact"])),
        tqi_display=Fraction(str(d["tqi_display"])),
        grade=d["grade"],
        breakdown=tuple(
            BreakdownEntry(
                category_id=entry["category_id"],
                severity=Severity.from_str(entry["severity"]),
                count=int(entry["count"]),
                points=Fraction(str(entry["points"])),
            )
            for entry in d["breakdown"]
        ),
        scale=d["scale"],
        rounding_mode=RoundingMode.from_str(d["rounding_mode"]),
    )


def decode_report(text: str) -> ScoreReport:
    return report_from_dict(json.loads(text))
