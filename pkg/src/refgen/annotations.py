"""Domain types for scenes and detections, and the file parsers that build them.

Two input formats are supported:

* the annotation file, a YouTube-VIS style JSON document with one record per
  tracked object and one (possibly ``null``) box per video frame;
* the detection sidecar, JSON Lines with one record per frame holding the
  boxes, class labels and attribute scores of an external detector.

All model values are frozen dataclasses and safe to share between workers.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

from refgen.errors import ParseError, ValidationError

Axis = Literal["horizontal", "vertical"]
AttributeKind = Literal["color", "other"]

CUE_TAGS = ("class", "size", "location", "color", "attribute")


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box with top-left origin, in pixels."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if self.w < 0 or self.h < 0:
            raise ValueError(f"box has negative size: w={self.w}, h={self.h}")

    @classmethod
    def from_xyxy(cls, x1: float, y1: float, x2: float, y2: float) -> BBox:
        return cls(x1, y1, x2 - x1, y2 - y1)

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def degenerate(self) -> bool:
        return self.w == 0 or self.h == 0

    def interval(self, axis: Axis) -> tuple[float, float]:
        """Projection of the box onto ``axis`` as a closed interval."""
        if axis == "horizontal":
            return (self.x, self.x + self.w)
        return (self.y, self.y + self.h)

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.w, self.h]


@dataclass(frozen=True)
class ObjectInstance:
    object_id: int
    category: str
    bbox: BBox | None = None


@dataclass(frozen=True)
class FrameScene:
    """Ground-truth objects visible in one frame, ordered by object id."""

    video_id: int
    frame_index: int
    objects: tuple[ObjectInstance, ...] = ()

    def __post_init__(self) -> None:
        objects = tuple(sorted(self.objects, key=lambda o: o.object_id))
        ids = [o.object_id for o in objects]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate object ids in frame {self.video_id}/{self.frame_index}")
        object.__setattr__(self, "objects", objects)

    def get(self, object_id: int) -> ObjectInstance:
        for obj in self.objects:
            if obj.object_id == object_id:
                return obj
        raise KeyError(object_id)

    @property
    def categories(self) -> frozenset[str]:
        return frozenset(o.category for o in self.objects)


@dataclass(frozen=True)
class AttributePrediction:
    name: str
    score: float
    kind: AttributeKind = "other"


def _attribute_order(attr: AttributePrediction) -> tuple[float, str]:
    return (-attr.score, attr.name)


@dataclass(frozen=True)
class Detection:
    """One box reported by the external detector.

    Attributes are kept in canonical order: descending score, then name.
    """

    bbox: BBox
    class_label: str
    score: float
    attributes: tuple[AttributePrediction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(sorted(self.attributes, key=_attribute_order)))

    def of_kind(self, kind: AttributeKind) -> tuple[AttributePrediction, ...]:
        return tuple(a for a in self.attributes if a.kind == kind)

    def carries(self, name: str, min_score: float) -> bool:
        return any(a.name == name and a.score >= min_score for a in self.attributes)


@dataclass(frozen=True)
class GeneratedExpression:
    video_id: int
    frame_index: int
    object_id: int
    text: str
    cues_used: frozenset[str] = field(default_factory=frozenset)
    ambiguous: bool = False

    def to_record(self) -> dict[str, Any]:
        """Record for the output JSON Lines file; key order is part of the format."""
        return {
            "video_id": self.video_id,
            "frame_index": self.frame_index,
            "object_id": self.object_id,
            "expression": self.text,
            "cues": [t for t in CUE_TAGS if t in self.cues_used],
            "ambiguous": self.ambiguous,
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> GeneratedExpression:
        return cls(
            video_id=record["video_id"],
            frame_index=record["frame_index"],
            object_id=record["object_id"],
            text=record["expression"],
            cues_used=frozenset(record.get("cues", ())),
            ambiguous=bool(record.get("ambiguous", False)),
        )


@dataclass(frozen=True)
class Track:
    """One annotation record: an object followed through every frame of its video."""

    video_id: int
    object_id: int
    category: str
    bboxes: tuple[BBox | None, ...]


@dataclass(frozen=True)
class Annotations:
    """Parsed annotation file.

    ``videos`` maps video id to frame count and ``categories`` maps category
    id to name. Per-frame views are produced by :meth:`scenes`.
    """

    videos: Mapping[int, int]
    categories: Mapping[int, str]
    tracks: tuple[Track, ...]

    @property
    def category_names(self) -> frozenset[str]:
        return frozenset(self.categories.values())

    def scenes(self) -> list[FrameScene]:
        """Every frame of every video, including frames with no visible objects."""
        by_video: dict[int, list[Track]] = {}
        for track in self.tracks:
            by_video.setdefault(track.video_id, []).append(track)
        scenes = []
        for video_id in sorted(self.videos):
            tracks = by_video.get(video_id, [])
            for frame in range(self.videos[video_id]):
                objects = [
                    ObjectInstance(t.object_id, t.category, t.bboxes[frame])
                    for t in tracks
                    if t.bboxes[frame] is not None
                ]
                scenes.append(FrameScene(video_id, frame, tuple(objects)))
        return scenes

    def scene(self, video_id: int, frame_index: int) -> FrameScene:
        if video_id not in self.videos or not 0 <= frame_index < self.videos[video_id]:
            raise KeyError((video_id, frame_index))
        objects = [
            ObjectInstance(t.object_id, t.category, t.bboxes[frame_index])
            for t in self.tracks
            if t.video_id == video_id and t.bboxes[frame_index] is not None
        ]
        return FrameScene(video_id, frame_index, tuple(objects))

    def track(self, video_id: int, object_id: int) -> Track:
        for t in self.tracks:
            if t.video_id == video_id and t.object_id == object_id:
                return t
        raise KeyError((video_id, object_id))

    def hidden_count(self) -> int:
        """Number of (object, frame) pairs where the object is not visible."""
        return sum(1 for t in self.tracks for b in t.bboxes if b is None)


# ---------------------------------------------------------------------------
# field readers
# ---------------------------------------------------------------------------


def _fail(what: str, path: str, source: str | None) -> ParseError:
    return ParseError(what, source=source, location=path)


def _get(obj: Any, key: str, path: str, source: str | None) -> Any:
    if not isinstance(obj, dict):
        raise _fail("expected an object", path, source)
    if key not in obj:
        raise _fail(f"missing field {key!r}", path, source)
    return obj[key]


def _int(value: Any, path: str, source: str | None) -> int:
    # bool is an int subclass; JSON true/false is never a valid id
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(f"expected an integer, got {value!r}", path, source)
    return value


def _number(value: Any, path: str, source: str | None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(f"expected a number, got {value!r}", path, source)
    if not math.isfinite(value):
        raise _fail(f"expected a finite number, got {value!r}", path, source)
    return float(value)


def _str(value: Any, path: str, source: str | None) -> str:
    if not isinstance(value, str) or not value.strip():
        raise _fail(f"expected a non-empty string, got {value!r}", path, source)
    return value


def _list(value: Any, path: str, source: str | None) -> list:
    if not isinstance(value, list):
        raise _fail(f"expected a list, got {type(value).__name__}", path, source)
    return value


def normalize_name(name: str) -> str:
    """Lowercase and collapse internal whitespace."""
    return " ".join(name.lower().split())


def _box4(value: Any, path: str, source: str | None) -> tuple[float, float, float, float]:
    items = _list(value, path, source)
    if len(items) != 4:
        raise _fail(f"expected 4 box coordinates, got {len(items)}", path, source)
    x, y, a, b = (_number(v, f"{path}[{i}]", source) for i, v in enumerate(items))
    return x, y, a, b


# ---------------------------------------------------------------------------
# annotation file
# ---------------------------------------------------------------------------


def _read_json(path: str | Path) -> Any:
    source = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}", source=source) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=source, location=f"line {exc.lineno} col {exc.colno}") from exc


def parse_annotations(path: str | Path) -> Annotations:
    """Read and validate an annotation file.

    Raises :class:`ParseError` for malformed content and
    :class:`ValidationError` for semantic violations such as negative box
    sizes or duplicate object ids.
    """
    return annotations_from_dict(_read_json(path), source=str(path))


def annotations_from_dict(data: Any, source: str | None = None) -> Annotations:
    if not isinstance(data, dict):
        raise _fail("top level must be an object", "", source)
    bbox_format = data.get("bbox_format", "xywh")
    if bbox_format not in ("xywh", "xyxy"):
        raise _fail(f"bbox_format must be 'xywh' or 'xyxy', got {bbox_format!r}", "bbox_format", source)

    videos: dict[int, int] = {}
    for i, rec in enumerate(_list(_get(data, "videos", "", source), "videos", source)):
        p = f"videos[{i}]"
        vid = _int(_get(rec, "id", p, source), f"{p}.id", source)
        frames = _int(_get(rec, "frames", p, source), f"{p}.frames", source)
        if frames < 0:
            raise _fail("frame count must be non-negative", f"{p}.frames", source)
        if vid in videos:
            raise ValidationError(f"duplicate video id {vid}", source=source, offenders=[vid])
        videos[vid] = frames

    categories: dict[int, str] = {}
    for i, rec in enumerate(_list(_get(data, "categories", "", source), "categories", source)):
        p = f"categories[{i}]"
        cid = _int(_get(rec, "id", p, source), f"{p}.id", source)
        name = normalize_name(_str(_get(rec, "name", p, source), f"{p}.name", source))
        if cid in categories:
            raise ValidationError(f"duplicate category id {cid}", source=source, offenders=[cid])
        categories[cid] = name

    tracks: list[Track] = []
    seen: set[tuple[int, int]] = set()
    negative: list[int] = []
    for i, rec in enumerate(_list(_get(data, "annotations", "", source), "annotations", source)):
        p = f"annotations[{i}]"
        vid = _int(_get(rec, "video_id", p, source), f"{p}.video_id", source)
        oid = _int(_get(rec, "object_id", p, source), f"{p}.object_id", source)
        cid = _int(_get(rec, "category_id", p, source), f"{p}.category_id", source)
        raw_boxes = _list(_get(rec, "bboxes", p, source), f"{p}.bboxes", source)
        if vid not in videos:
            raise ValidationError(f"{p}: unknown video id {vid}", source=source, offenders=[oid])
        if cid not in categories:
            raise ValidationError(f"{p}: unknown category id {cid}", source=source, offenders=[oid])
        if (vid, oid) in seen:
            raise ValidationError(
                f"{p}: duplicate object id {oid} in video {vid}", source=source, offenders=[oid]
            )
        seen.add((vid, oid))
        if len(raw_boxes) != videos[vid]:
            raise ValidationError(
                f"{p}: {len(raw_boxes)} boxes for a video of {videos[vid]} frames",
                source=source,
                offenders=[oid],
            )
        boxes: list[BBox | None] = []
        bad = False
        for f, raw in enumerate(raw_boxes):
            if raw is None:
                boxes.append(None)
                continue
            x, y, a, b = _box4(raw, f"{p}.bboxes[{f}]", source)
            w, h = (a - x, b - y) if bbox_format == "xyxy" else (a, b)
            if w < 0 or h < 0:
                bad = True
                boxes.append(None)
                continue
            boxes.append(BBox(x, y, w, h))
        if bad:
            negative.append(oid)
        tracks.append(Track(vid, oid, categories[cid], tuple(boxes)))

    if negative:
        raise ValidationError(
            f"negative box width/height for object id(s) {negative}", source=source, offenders=negative
        )
    tracks.sort(key=lambda t: (t.video_id, t.object_id))
    return Annotations(videos=videos, categories=categories, tracks=tuple(tracks))


def annotations_to_dict(ann: Annotations) -> dict[str, Any]:
    """Serialize back to the annotation schema (always ``xywh``)."""
    inverse = {}
    for cid in sorted(ann.categories):
        inverse.setdefault(ann.categories[cid], cid)
    return {
        "videos": [{"id": v, "frames": ann.videos[v]} for v in sorted(ann.videos)],
        "categories": [{"id": c, "name": ann.categories[c]} for c in sorted(ann.categories)],
        "annotations": [
            {
                "video_id": t.video_id,
                "object_id": t.object_id,
                "category_id": inverse[t.category],
                "bboxes": [b.as_list() if b is not None else None for b in t.bboxes],
            }
            for t in ann.tracks
        ],
        "bbox_format": "xywh",
    }


# ---------------------------------------------------------------------------
# detection sidecar
# ---------------------------------------------------------------------------

FrameKey = tuple[int, int]


def _score(value: Any, path: str, source: str | None) -> float:
    score = _number(value, path, source)
    if not 0.0 <= score <= 1.0:
        raise ValidationError(f"{path}: score {score} outside [0, 1]", source=source)
    return score


def _detection(rec: Any, path: str, source: str | None, colors: frozenset[str]) -> Detection:
    x, y, w, h = _box4(_get(rec, "bbox", path, source), f"{path}.bbox", source)
    if w < 0 or h < 0:
        raise ValidationError(f"{path}.bbox: negative width/height", source=source)
    label = normalize_name(_str(_get(rec, "class", path, source), f"{path}.class", source))
    score = _score(_get(rec, "score", path, source), f"{path}.score", source)
    attrs = []
    for j, a in enumerate(_list(rec.get("attributes", []), f"{path}.attributes", source)):
        ap = f"{path}.attributes[{j}]"
        name = normalize_name(_str(_get(a, "name", ap, source), f"{ap}.name", source))
        attrs.append(
            AttributePrediction(
                name=name,
                score=_score(_get(a, "score", ap, source), f"{ap}.score", source),
                kind="color" if name in colors else "other",
            )
        )
    return Detection(BBox(x, y, w, h), label, score, tuple(attrs))


def iter_detection_records(
    lines: Iterable[str], color_lexicon: Iterable[str], source: str | None = None
) -> Iterator[tuple[FrameKey, tuple[Detection, ...]]]:
    colors = frozenset(normalize_name(c) for c in color_lexicon)
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        where = f"line {lineno}"
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, source=source, location=f"{where} col {exc.colno}") from exc
        vid = _int(_get(rec, "video_id", where, source), f"{where}: video_id", source)
        frame = _int(_get(rec, "frame_index", where, source), f"{where}: frame_index", source)
        if frame < 0:
            raise _fail("frame_index must be non-negative", f"{where}: frame_index", source)
        items = _list(_get(rec, "detections", where, source), f"{where}: detections", source)
        dets = tuple(_detection(d, f"{where}: detections[{k}]", source, colors) for k, d in enumerate(items))
        yield (vid, frame), dets


def parse_detections(
    path: str | Path, color_lexicon: Iterable[str]
) -> dict[FrameKey, tuple[Detection, ...]]:
    """Read the detection sidecar into a map keyed by ``(video_id, frame_index)``.

    Records for frames that have no annotations are kept; the generator
    simply never asks for them.
    """
    source = str(path)
    out: dict[FrameKey, tuple[Detection, ...]] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for key, dets in iter_detection_records(fh, color_lexicon, source):
                if key in out:
                    raise ValidationError(f"duplicate record for video {key[0]} frame {key[1]}", source=source)
                out[key] = dets
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}", source=source) from exc
    return out
