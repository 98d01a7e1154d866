"""The four disambiguating cues: class, relative size, relative location, attributes.

Every function here is pure. Both the generator and the resolver call them,
so a cue means exactly the same thing on both sides.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, fields
from typing import Literal, Union

from refgen.annotations import Detection, FrameScene, ObjectInstance
from refgen.geometry import iou, most_separative_axis, separability

SizeForm = Literal["bigger", "smaller", "biggest", "smallest"]

SIZE_FORMS: tuple[str, ...] = ("bigger", "smaller", "biggest", "smallest")
SUPERLATIVES = frozenset({"biggest", "smallest"})

LOCATION_PHRASES: tuple[str, ...] = (
    "on the right",
    "on the left",
    "in the back",
    "in the front",
    "in the middle",
    "in the back right",
    "in the back left",
    "in the front right",
    "in the front left",
)

_SINGLE_PHRASE = {
    "left": "on the left",
    "right": "on the right",
    "back": "in the back",
    "front": "in the front",
}
_HORIZONTAL = frozenset({"left", "right"})
_VERTICAL = frozenset({"back", "front"})

# relative location only makes sense among two or three same-class objects
MAX_LOCATION_OTHERS = 2


@dataclass(frozen=True)
class CueConfig:
    size_ratio: float = 2.0
    tau_loc: float = 0.2
    tau_iou: float = 0.5
    tau_attr: float = 0.3
    color_gap: float = 0.05

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"{f.name} must be a number, got {value!r}")
        if not self.size_ratio > 1.0:
            raise ValueError(f"size_ratio must be > 1, got {self.size_ratio}")
        for name in ("tau_loc", "tau_iou", "tau_attr"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if not 0.0 <= self.color_gap <= 1.0:
            raise ValueError(f"color_gap must lie in [0, 1], got {self.color_gap}")


@dataclass(frozen=True)
class ClassCue:
    category: str
    tag = "class"


@dataclass(frozen=True)
class SizeCue:
    form: SizeForm
    tag = "size"

    def __post_init__(self) -> None:
        if self.form not in SIZE_FORMS:
            raise ValueError(f"unknown size form {self.form!r}")


@dataclass(frozen=True)
class LocationCue:
    phrase: str
    tag = "location"

    def __post_init__(self) -> None:
        if self.phrase not in LOCATION_PHRASES:
            raise ValueError(f"unknown location phrase {self.phrase!r}")


@dataclass(frozen=True)
class ColorCue:
    colors: tuple[str, ...]
    tag = "color"

    def __post_init__(self) -> None:
        if not 1 <= len(self.colors) <= 2:
            raise ValueError("a color cue holds one or two colors")


@dataclass(frozen=True)
class AttrCue:
    name: str
    tag = "attribute"


Cue = Union[ClassCue, SizeCue, LocationCue, ColorCue, AttrCue]


@dataclass(frozen=True)
class CueSet:
    class_cue: ClassCue
    class_unique: bool
    size: SizeCue | None = None
    location: LocationCue | None = None
    color: ColorCue | None = None
    attribute: AttrCue | None = None


def same_class_others(target: ObjectInstance, scene: FrameScene) -> list[ObjectInstance]:
    return [
        o
        for o in scene.objects
        if o.category == target.category and o.object_id != target.object_id and o.bbox is not None
    ]


def size_cue(
    target: ObjectInstance, others: Sequence[ObjectInstance], cfg: CueConfig
) -> SizeCue | None:
    if not others:
        return None
    area = target.bbox.area
    areas = [o.bbox.area for o in others]
    # multiplication on both sides keeps "A bigger" and "B smaller" the same inequality
    if area > 0 and area >= cfg.size_ratio * max(areas):
        return SizeCue("bigger" if len(others) == 1 else "biggest")
    if min(areas) > 0 and area * cfg.size_ratio <= min(areas):
        return SizeCue("smaller" if len(others) == 1 else "smallest")
    return None


def pairwise_direction(target: ObjectInstance, other: ObjectInstance, cfg: CueConfig) -> str | None:
    """Where ``target`` sits relative to ``other``: left/right/back/front, or None."""
    sep = most_separative_axis(target.bbox, other.bbox)
    if sep.ordering == "equal":
        return None
    if separability(target.bbox, other.bbox, sep.axis) > cfg.tau_loc:
        return None
    lower = sep.ordering == "a"
    if sep.axis == "horizontal":
        return "left" if lower else "right"
    return "back" if lower else "front"


def location_cue(
    target: ObjectInstance, others: Sequence[ObjectInstance], cfg: CueConfig
) -> LocationCue | None:
    if not 1 <= len(others) <= MAX_LOCATION_OTHERS:
        return None
    dirs = [pairwise_direction(target, o, cfg) for o in others]
    if any(d is None for d in dirs):
        return None
    if len(dirs) == 1 or dirs[0] == dirs[1]:
        return LocationCue(_SINGLE_PHRASE[dirs[0]])
    pair = set(dirs)
    if pair == _HORIZONTAL:
        return LocationCue("in the middle")
    if pair == _VERTICAL:
        return None
    (vertical,) = pair & _VERTICAL
    (horizontal,) = pair & _HORIZONTAL
    return LocationCue(f"in the {vertical} {horizontal}")


def match_detection(target_bbox, detections: Sequence[Detection], cfg: CueConfig) -> Detection | None:
    """Detection with the highest IoU against ``target_bbox``, if that IoU is over ``tau_iou``.

    Equal IoUs prefer the higher detection score, then the earlier detection.
    """
    best = None
    best_key = None
    for det in detections:
        key = (iou(target_bbox, det.bbox), det.score)
        if best_key is None or key > best_key:
            best, best_key = det, key
    if best is None or not best_key[0] > cfg.tau_iou:
        return None
    return best


def _color_candidate(det: Detection, cfg: CueConfig) -> tuple[str, ...]:
    colors = [a for a in det.of_kind("color") if a.score >= cfg.tau_attr]
    if not colors:
        return ()
    first = colors[0]
    for second in colors[1:]:
        if second.name == first.name:
            continue
        if first.score - second.score <= cfg.color_gap:
            return (first.name, second.name)
        break
    return (first.name,)


def attribute_cues(
    target: ObjectInstance,
    others: Sequence[ObjectInstance],
    frame_detections: Sequence[Detection],
    cfg: CueConfig,
) -> tuple[ColorCue | None, AttrCue | None]:
    det = match_detection(target.bbox, frame_detections, cfg)
    if det is None:
        return None, None
    competitors = [
        d for d in (match_detection(o.bbox, frame_detections, cfg) for o in others) if d is not None
    ]

    def shared(name: str) -> bool:
        return any(c.carries(name, cfg.tau_attr) for c in competitors)

    color = None
    colors = _color_candidate(det, cfg)
    if colors and not any(shared(c) for c in colors):
        color = ColorCue(colors)

    attr = None
    plain = [a for a in det.of_kind("other") if a.score >= cfg.tau_attr]
    if plain and not shared(plain[0].name):
        attr = AttrCue(plain[0].name)
    return color, attr


def extract_cues(
    target: ObjectInstance,
    scene: FrameScene,
    frame_detections: Sequence[Detection],
    cfg: CueConfig,
) -> CueSet:
    others = same_class_others(target, scene)
    color, attr = attribute_cues(target, others, frame_detections, cfg)
    if not others:
        return CueSet(ClassCue(target.category), True, color=color, attribute=attr)
    return CueSet(
        ClassCue(target.category),
        False,
        size=size_cue(target, others, cfg),
        location=location_cue(target, others, cfg),
        color=color,
        attribute=attr,
    )
