"""Per-frame expression sets with a uniqueness check on every candidate."""

from __future__ import annotations

import os
from collections.abc import Collection, Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from refgen.annotations import Annotations, Detection, FrameKey, FrameScene, GeneratedExpression, ObjectInstance
from refgen.config import DEFAULT_COLOR_LEXICON
from refgen.cues import CueConfig, CueSet, extract_cues
from refgen.errors import ExpressionParseError
from refgen.expression import ExpressionAst, compose, parse_expression, render
from refgen.resolver import resolve

# candidate cue selections, in emission order; the class cue is implied
CANDIDATES: tuple[tuple[str, ...], ...] = (
    (),
    ("size",),
    ("location",),
    ("color",),
    ("attribute",),
    ("color", "attribute"),
    ("size", "location"),
    ("size", "color"),
    ("location", "color"),
)

THREADS_ENV = "SYNTHREF_THREADS"


def candidate_asts(cues: CueSet) -> list[ExpressionAst]:
    out = []
    for selection in CANDIDATES:
        if not selection and not cues.class_unique:
            continue
        parts = [getattr(cues, name) for name in selection]
        if any(p is None for p in parts):
            continue
        out.append(compose([cues.class_cue, *parts]))
    return out


def generate_for_target(
    target: ObjectInstance,
    scene: FrameScene,
    frame_detections: Sequence[Detection],
    cfg: CueConfig,
    category_table: Collection[str] | None = None,
    color_lexicon: Collection[str] = DEFAULT_COLOR_LEXICON,
) -> list[GeneratedExpression]:
    """Every candidate that survives the round trip and resolves to ``target`` alone.

    Falls back to the bare class expression, flagged ambiguous, when none
    survives.
    """
    categories = scene.categories if category_table is None else frozenset(category_table)
    cues = extract_cues(target, scene, frame_detections, cfg)
    kept: list[GeneratedExpression] = []
    seen: set[str] = set()
    for ast in candidate_asts(cues):
        text = render(ast)
        if text in seen:
            continue
        try:
            parsed = parse_expression(text, categories, color_lexicon)
        except ExpressionParseError:
            continue
        if parsed != ast:
            continue
        res = resolve(parsed, scene, frame_detections, cfg)
        if res.matches != {target.object_id}:
            continue
        seen.add(text)
        kept.append(
            GeneratedExpression(scene.video_id, scene.frame_index, target.object_id, text, ast.cue_tags)
        )
    if not kept:
        fallback = compose([cues.class_cue])
        kept.append(
            GeneratedExpression(
                scene.video_id,
                scene.frame_index,
                target.object_id,
                render(fallback),
                fallback.cue_tags,
                ambiguous=True,
            )
        )
    return kept


GroupKey = tuple[int, int, int]


@dataclass
class GenerationReport:
    groups: dict[GroupKey, list[GeneratedExpression]] = field(default_factory=dict)
    emitted: int = 0
    fallbacks: int = 0
    frames_skipped: int = 0

    @property
    def expressions(self) -> list[GeneratedExpression]:
        """All records in canonical order (video, frame, object, candidate order)."""
        return [e for key in sorted(self.groups) for e in self.groups[key]]


def resolve_workers(value: int | str | None = None) -> int:
    """Worker count from an explicit value or ``SYNTHREF_THREADS``; 0 means one per CPU."""
    if value is None:
        value = os.environ.get(THREADS_ENV, "1") or "1"
    n = int(value)
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def generate_dataset(
    scenes: Annotations | Iterable[FrameScene],
    detections: Mapping[FrameKey, Sequence[Detection]],
    cfg: CueConfig,
    color_lexicon: Collection[str] = DEFAULT_COLOR_LEXICON,
    workers: int | None = None,
) -> GenerationReport:
    """Run :func:`generate_for_target` on every visible object of every frame.

    Frames without a detection record are processed with no detections.
    Output order does not depend on ``workers``.
    """
    report = GenerationReport()
    if isinstance(scenes, Annotations):
        categories: frozenset[str] | None = scenes.category_names
        report.frames_skipped = scenes.hidden_count()
        scene_list = scenes.scenes()
    else:
        scene_list = list(scenes)
        categories = frozenset(o.category for s in scene_list for o in s.objects)
    lexicon = frozenset(color_lexicon)

    def work(scene: FrameScene) -> list[list[GeneratedExpression]]:
        dets = detections.get((scene.video_id, scene.frame_index), ())
        return [generate_for_target(o, scene, dets, cfg, categories, lexicon) for o in scene.objects]

    n = resolve_workers(workers)
    if n == 1:
        results = [work(s) for s in scene_list]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(work, scene_list))

    for scene, per_object in zip(scene_list, results):
        for obj, records in zip(scene.objects, per_object):
            report.groups[(scene.video_id, scene.frame_index, obj.object_id)] = records
            report.emitted += len(records)
            report.fallbacks += sum(r.ambiguous for r in records)
    return report
