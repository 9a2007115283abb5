"""Assessment configuration: taxonomy, weights, grade scales, representations.

A config file is a JSON object; every key is optional and falls back to the
built-in default.  Recognized keys: "taxonomy", "weights", "scales",
"representations", "rounding_mode".  The first scale listed is the default.

Resolution order: explicit path, then the TQAMARK_CONFIG environment
variable, then ./tqamark.config, then built-in defaults.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, UnknownRepresentation, UnknownScale
from .rendering import Representation, builtin_representations
from .scoring import GradeBand, GradeScale, RoundingMode, WeightConfig
from .taxonomy import Taxonomy, default_taxonomy

ENV_VAR = "TQAMARK_CONFIG"
LOCAL_CONFIG = "tqamark.config"


def default_scales() -> tuple:
    """Freshman and senior band sets; freshman first, hence the default."""
    def bands(edges, labels):
        return tuple(
            GradeBand(Fraction(lo), Fraction(hi), label)
            for (lo, hi), label in zip(zip(edges, edges[1:]), labels)
        )

    labels = ("unsatisfactory", "satisfactory", "good", "excellent")
    return (
        GradeScale("freshman", bands((0, 70, 85, 95, 100), labels)),
        GradeScale("senior", bands((0, 80, 92, 97, 100), labels)),
    )


@dataclass(frozen=True)
class AssessmentConfig:
    """Everything a scoring or rendering run needs, resolved and validated."""

    taxonomy: Taxonomy
    weights: WeightConfig
    scales: tuple
    representations: dict
    rounding_mode: RoundingMode = RoundingMode.EXACT_2DP
    source: str = "builtin"

    def __post_init__(self):
        if not self.scales:
            raise ConfigError("config must define at least one grade scale")
        names = [s.name for s in self.scales]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate scale names in config")

    @property
    def default_scale(self) -> GradeScale:
        return self.scales[0]

    def scale(self, name: str | None) -> GradeScale:
        if name is None:
            return self.default_scale
        for scale in self.scales:
            if scale.name == name:
                return scale
        raise UnknownScale(
            "unknown scale %r (have: %s)" % (name, ", ".join(s.name for s in self.scales))
        )

    def representation(self, name: str) -> Representation:
        try:
            return self.representations[name]
        except KeyError:
            raise UnknownRepresentation(
                "unknown representation %r (have: %s)"
                % (name, ", ".join(sorted(self.representations)))
            ) from None

    def to_dict(self) -> dict:
        return {
            "taxonomy": self.taxonomy.to_dict(),
            "weights": self.weights.to_dict(),
            "scales": [s.to_dict() for s in self.scales],
            "representations": [r.to_dict() for r in self.representations.values()],
            "rounding_mode": self.rounding_mode.value,
        }


def default_config() -> AssessmentConfig:
    return AssessmentConfig(
        taxonomy=default_taxonomy(),
        weights=WeightConfig(),
        scales=default_scales(),
        representations=builtin_representations(),
        rounding_mode=RoundingMode.EXACT_2DP,
    )


def config_from_dict(data: dict, source: str = "dict") -> AssessmentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    unknown = set(data) - {"taxonomy", "weights", "scales", "representations", "rounding_mode"}
    if unknown:
        raise ConfigError("unknown config keys: %s" % ", ".join(sorted(unknown)))
    try:
        taxonomy = (
            Taxonomy.from_dict(data["taxonomy"]) if "taxonomy" in data else default_taxonomy()
        )
        weights = (
            WeightConfig.from_dict(data["weights"]) if "weights" in data else WeightConfig()
        )
        scales = (
            tuple(GradeScale.from_dict(s) for s in data["scales"])
            if "scales" in data
            else default_scales()
        )
        representations = builtin_representations()
        for spec in data.get("representations", []):
            rep = Representation.from_dict(spec)
            representations[rep.name] = rep
        mode = RoundingMode.from_str(data.get("rounding_mode", RoundingMode.EXACT_2DP.value))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("invalid config (%s): %s" % (source, exc)) from exc
    return AssessmentConfig(
        taxonomy=taxonomy,
        weights=weights,
        scales=scales,
        representations=representations,
        rounding_mode=mode,
        source=source,
    )


def load_config(path) -> AssessmentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
    try:
        data = json.loads(text)
    except ValueError as exc:
        raise ConfigError("config %s is not valid JSON: %s" % (path, exc)) from exc
    return config_from_dict(data, source=str(path))


def resolve_config(explicit_path=None, environ=None, cwd=None) -> AssessmentConfig:
    """Pick the active config per the documented precedence chain."""
    environ = os.environ if environ is None else environ
    cwd = Path.cwd() if cwd is None else Path(cwd)
    if explicit_path is not None:
        return load_config(explicit_path)
    env_path = environ.get(ENV_VAR)
    if env_path:
        return load_config(env_path)
    local = cwd / LOCAL_CONFIG
    if local.exists():
        return load_config(local)
    return default_config()
