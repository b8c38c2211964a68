from __future__ import annotations

from typing import List, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator


class PointEntry(BaseModel):
    id: int = Field(ge=0)
    label: str = Field(min_length=1)


class FrameDocument(BaseModel):
    """On-disk frame: dense point ids, unique labels, cover pairs."""

    name: str = ""
    points: List[PointEntry]
    covers: List[Tuple[int, int]] = Field(default_factory=list)

    @field_validator("points")
    @classmethod
    def _dense_ids(cls, points: List[PointEntry]) -> List[PointEntry]:
        for i, pt in enumerate(points):
            if pt.id != i:
                raise ValueError(f"point ids must be 0..n-1 in order; position {i} has id {pt.id}")
        labels = [pt.label for pt in points]
        if len(set(labels)) != len(labels):
            dup = next(lb for lb in labels if labels.count(lb) > 1)
            raise ValueError(f"duplicate point label {dup!r}")
        return points

    @model_validator(mode="after")
    def _covers_in_range(self) -> "FrameDocument":
        n = len(self.points)
        for a, b in self.covers:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"cover [{a}, {b}] refers to a missing point")
        return self
