"""Pipeline configuration: cue thresholds plus the color lexicon.

The config file is flat TOML::

    size_ratio = 2.0
    tau_loc = 0.2
    tau_iou = 0.5
    tau_attr = 0.3
    color_gap = 0.05
    color_lexicon = "colors.txt"   # one color per line, relative to this file

Absent keys take their defaults.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from refgen.annotations import normalize_name
from refgen.cues import CueConfig
from refgen.errors import ParseError, ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_COLOR_LEXICON = frozenset(
    {
        "beige",
        "black",
        "blond",
        "blue",
        "brown",
        "gold",
        "gray",
        "green",
        "grey",
        "maroon",
        "orange",
        "pink",
        "purple",
        "red",
        "silver",
        "tan",
        "white",
        "yellow",
    }
)

_CUE_KEYS = frozenset(f.name for f in fields(CueConfig))


@dataclass(frozen=True)
class PipelineConfig:
    cue: CueConfig = field(default_factory=CueConfig)
    color_lexicon: frozenset[str] = DEFAULT_COLOR_LEXICON


def read_lexicon(path: str | Path) -> frozenset[str]:
    """One entry per line; blank lines and ``#`` comments are skipped."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}", source=str(path)) from exc
    words = {normalize_name(line.split("#", 1)[0]) for line in lines}
    words.discard("")
    return frozenset(words)


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    source = str(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(str(exc), source=source) from exc

    unknown = sorted(set(data) - _CUE_KEYS - {"color_lexicon"})
    if unknown:
        raise ValidationError(f"unknown config key(s): {', '.join(unknown)}", source=source)
    try:
        cue = CueConfig(**{k: v for k, v in data.items() if k in _CUE_KEYS})
    except ValueError as exc:
        raise ValidationError(str(exc), source=source) from exc

    lexicon = DEFAULT_COLOR_LEXICON
    if "color_lexicon" in data:
        ref = data["color_lexicon"]
        if not isinstance(ref, str):
            raise ValidationError("color_lexicon must be a file path", source=source)
        lexicon_path = Path(ref)
        if not lexicon_path.is_absolute():
            lexicon_path = Path(path).parent / lexicon_path
        lexicon = read_lexicon(lexicon_path)
    return PipelineConfig(cue=cue, color_lexicon=lexicon)
