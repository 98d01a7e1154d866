"""Synthetic referring expressions from box annotations and detector attributes."""

from refgen.annotations import (
    Annotations,
    AttributePrediction,
    BBox,
    Detection,
    FrameScene,
    GeneratedExpression,
    ObjectInstance,
    parse_annotations,
    parse_detections,
)
from refgen.config import DEFAULT_COLOR_LEXICON, PipelineConfig, load_config
from refgen.cues import CueConfig, CueSet, extract_cues
from refgen.dataset import DatasetStats, compute_stats
from refgen.expression import ExpressionAst, compose, parse_expression, render
from refgen.generator import GenerationReport, generate_dataset, generate_for_target
from refgen.geometry import iou, most_separative_axis, separability
from refgen.resolver import Resolution, resolve

__all__ = [
    "Annotations",
    "AttributePrediction",
    "BBox",
    "CueConfig",
    "CueSet",
    "DEFAULT_COLOR_LEXICON",
    "DatasetStats",
    "Detection",
    "ExpressionAst",
    "FrameScene",
    "GeneratedExpression",
    "GenerationReport",
    "ObjectInstance",
    "PipelineConfig",
    "Resolution",
    "compose",
    "compute_stats",
    "extract_cues",
    "generate_dataset",
    "generate_for_target",
    "iou",
    "load_config",
    "most_separative_axis",
    "parse_annotations",
    "parse_detections",
    "parse_expression",
    "render",
    "resolve",
    "separability",
]
