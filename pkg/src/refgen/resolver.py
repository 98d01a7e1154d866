"""Denotation of an expression in a frame: which objects does it pick out?"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from refgen.annotations import Detection, FrameScene
from refgen.cues import CueConfig, location_cue, match_detection, same_class_others, size_cue
from refgen.expression import ExpressionAst

Verdict = Literal["unique", "ambiguous", "empty"]

# a superlative also reads naturally for a pair ("the smallest of the two")
_SIZE_READINGS = {
    "bigger": frozenset({"bigger"}),
    "smaller": frozenset({"smaller"}),
    "biggest": frozenset({"biggest", "bigger"}),
    "smallest": frozenset({"smallest", "smaller"}),
}


@dataclass(frozen=True)
class Resolution:
    matches: frozenset[int]
    verdict: Verdict

    @classmethod
    def of(cls, matches) -> Resolution:
        matches = frozenset(matches)
        verdict = "empty" if not matches else "unique" if len(matches) == 1 else "ambiguous"
        return cls(matches, verdict)

    def to_dict(self) -> dict:
        return {"matches": sorted(self.matches), "verdict": self.verdict}


def resolve(
    ast: ExpressionAst,
    scene: FrameScene,
    frame_detections: Sequence[Detection],
    cfg: CueConfig,
) -> Resolution:
    """Objects in ``scene`` that the expression describes.

    Candidates start as every visible object of the named class and are
    narrowed by size, then location, then attributes. Each object's size and
    location are judged against all other visible objects of its class, the
    same comparison the generator made.
    """
    candidates = [o for o in scene.objects if o.category == ast.noun and o.bbox is not None]

    if ast.size is not None:
        accepted = _SIZE_READINGS[ast.size]
        candidates = [
            o
            for o in candidates
            if (cue := size_cue(o, same_class_others(o, scene), cfg)) is not None and cue.form in accepted
        ]
    if ast.location is not None:
        candidates = [
            o
            for o in candidates
            if (cue := location_cue(o, same_class_others(o, scene), cfg)) is not None
            and cue.phrase == ast.location
        ]
    named = [*ast.colors, *([ast.attribute] if ast.attribute else [])]
    if named:
        kept = []
        for o in candidates:
            det = match_detection(o.bbox, frame_detections, cfg)
            if det is not None and all(det.carries(n, cfg.tau_attr) for n in named):
                kept.append(o)
        candidates = kept

    return Resolution.of(o.object_id for o in candidates)
