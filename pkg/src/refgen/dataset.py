"""Output dataset I/O and aggregate statistics."""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import asdict, dataclass
from pathlib import Path

from refgen.annotations import Annotations, GeneratedExpression
from refgen.errors import ParseError, ValidationError
from refgen.expression import word_count


@dataclass(frozen=True)
class DatasetStats:
    videos: int
    objects: int
    categories: int
    expressions: int
    records: int
    expressions_per_object: float
    words_per_expression: float

    def to_dict(self) -> dict:
        return asdict(self)


def dumps_record(expr: GeneratedExpression) -> str:
    return json.dumps(expr.to_record(), ensure_ascii=False)


def write_dataset(records: Iterable[GeneratedExpression], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(dumps_record(rec))
            fh.write("\n")


_FIELDS = {
    "video_id": int,
    "frame_index": int,
    "object_id": int,
    "expression": str,
    "cues": list,
    "ambiguous": bool,
}


def read_dataset(path: str | Path) -> list[GeneratedExpression]:
    source = str(path)
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, source=source, location=f"line {lineno}") from exc
            if not isinstance(rec, dict):
                raise ParseError("expected an object", source=source, location=f"line {lineno}")
            for key, typ in _FIELDS.items():
                value = rec.get(key)
                if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
                    raise ParseError(
                        f"field {key!r} must be {typ.__name__}", source=source, location=f"line {lineno}"
                    )
            if not rec["expression"].strip():
                raise ParseError("empty expression", source=source, location=f"line {lineno}")
            out.append(GeneratedExpression.from_record(rec))
    return out


def compute_stats(records: Iterable[GeneratedExpression], annotations: Annotations) -> DatasetStats:
    """Table-style aggregates over objects that have at least one expression.

    ``expressions`` counts distinct texts per object, summed; ``records``
    counts every line. Words per expression is averaged over records.
    """
    known = {(t.video_id, t.object_id): t.category for t in annotations.tracks}
    texts: dict[tuple[int, int], set[str]] = {}
    n_records = 0
    n_words = 0
    for rec in records:
        key = (rec.video_id, rec.object_id)
        if key not in known:
            raise ValidationError(
                f"record references unknown object {rec.object_id} in video {rec.video_id}",
                offenders=[rec.object_id],
            )
        texts.setdefault(key, set()).add(rec.text)
        n_records += 1
        n_words += word_count(rec.text)

    objects = len(texts)
    expressions = sum(len(v) for v in texts.values())
    return DatasetStats(
        videos=len({v for v, _ in texts}),
        objects=objects,
        categories=len({known[k] for k in texts}),
        expressions=expressions,
        records=n_records,
        expressions_per_object=expressions / objects if objects else 0.0,
        words_per_expression=n_words / n_records if n_records else 0.0,
    )
