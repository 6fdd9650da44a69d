from __future__ import annotations

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from features.lattice.geometry import polygon_is_simple

Point = tuple[float, float]


class _Shape(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    def bounding_box(self) -> tuple[Point, Point]:
        raise NotImplementedError

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Open-set membership of an (m, 2) array of continuum points."""
        raise NotImplementedError

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        """Euclidean distance from each point to the boundary."""
        raise NotImplementedError

    def exact_conformal_radius(self, points: np.ndarray) -> np.ndarray | None:
        """Closed-form conformal radius when the shape has one."""
        return None

    def area(self) -> float:
        raise NotImplementedError


class Disc(_Shape):
    shape: Literal["disc"] = "disc"
    center: Point = (0.0, 0.0)
    radius: float = 1.0

    @field_validator("radius")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("radius must be positive")
        return value

    def bounding_box(self) -> tuple[Point, Point]:
        cx, cy = self.center
        r = self.radius
        return (cx - r, cy - r), (cx + r, cy + r)

    def _offsets(self, points: np.ndarray) -> np.ndarray:
        return np.hypot(points[:, 0] - self.center[0], points[:, 1] - self.center[1])

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self._offsets(points) < self.radius

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        return np.abs(self.radius - self._offsets(points))

    def exact_conformal_radius(self, points: np.ndarray) -> np.ndarray:
        d = self._offsets(points)
        return (self.radius**2 - d**2) / self.radius

    def area(self) -> float:
        return float(np.pi * self.radius**2)


class Rectangle(_Shape):
    shape: Literal["rectangle"] = "rectangle"
    lower: Point = (0.0, 0.0)
    upper: Point = (1.0, 1.0)

    @model_validator(mode="after")
    def _sides_positive(self) -> Rectangle:
        if not (self.upper[0] > self.lower[0] and self.upper[1] > self.lower[1]):
            raise ValueError("rectangle sides must be positive")
        return self

    def bounding_box(self) -> tuple[Point, Point]:
        return self.lower, self.upper

    def contains(self, points: np.ndarray) -> np.ndarray:
        return (
            (points[:, 0] > self.lower[0])
            & (points[:, 0] < self.upper[0])
            & (points[:, 1] > self.lower[1])
            & (points[:, 1] < self.upper[1])
        )

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        gaps = np.stack(
            [
                points[:, 0] - self.lower[0],
                self.upper[0] - points[:, 0],
                points[:, 1] - self.lower[1],
                self.upper[1] - points[:, 1],
            ]
        )
        return np.abs(gaps).min(axis=0)

    def area(self) -> float:
        return (self.upper[0] - self.lower[0]) * (self.upper[1] - self.lower[1])


class Polygon(_Shape):
    shape: Literal["polygon"] = "polygon"
    vertices: tuple[Point, ...]

    @field_validator("vertices")
    @classmethod
    def _simple(cls, value: tuple[Point, ...]) -> tuple[Point, ...]:
        if len(value) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        if not polygon_is_simple(value):
            raise ValueError("polygon must be simple")
        return value

    def bounding_box(self) -> tuple[Point, Point]:
        v = np.asarray(self.vertices)
        lo, hi = v.min(axis=0), v.max(axis=0)
        return (float(lo[0]), float(lo[1])), (float(hi[0]), float(hi[1]))

    def contains(self, points: np.ndarray) -> np.ndarray:
        v = np.asarray(self.vertices, dtype=float)
        x, y = points[:, 0][:, None], points[:, 1][:, None]
        x0, y0 = v[:, 0][None, :], v[:, 1][None, :]
        x1, y1 = np.roll(v[:, 0], -1)[None, :], np.roll(v[:, 1], -1)[None, :]
        straddles = (y0 > y) != (y1 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            cross_x = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        hits = straddles & (x < cross_x)
        inside = (hits.sum(axis=1) % 2) == 1
        return inside & (self.boundary_distance(points) > 0)

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        v = np.asarray(self.vertices, dtype=float)
        a = v[None, :, :]
        b = np.roll(v, -1, axis=0)[None, :, :]
        p = points[:, None, :]
        ab = b - a
        length2 = (ab**2).sum(axis=2)
        s = np.clip(((p - a) * ab).sum(axis=2) / length2, 0.0, 1.0)
        nearest = a + s[..., None] * ab
        return np.sqrt(((p - nearest) ** 2).sum(axis=2)).min(axis=1)

    def area(self) -> float:
        v = np.asarray(self.vertices, dtype=float)
        x, y = v[:, 0], v[:, 1]
        return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2)


ContinuumDomain = Annotated[Union[Disc, Rectangle, Polygon], Field(discriminator="shape")]


def unit_square() -> Rectangle:
    return Rectangle(lower=(0.0, 0.0), upper=(1.0, 1.0))


def unit_disc() -> Disc:
    return Disc(center=(0.0, 0.0), radius=1.0)
