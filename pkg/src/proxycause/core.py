"""Shared domain types, deterministic seeding, and JSON-lines serialization.

Every source of randomness in the library flows through :class:`SeedSpec`:
a 64-bit master seed plus a task-id string, mixed into a per-task stream
seed.  No module touches the global numpy RNG, so pipelines stay
reproducible under any execution order or worker count.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "Verdict",
    "Direction",
    "ScatterSample",
    "LabeledScatterDataset",
    "SeedSpec",
    "derive_seed",
    "scatter_dumps",
    "scatter_loads",
    "save_scatter",
    "load_scatter",
    "dataset_dumps",
    "dataset_loads",
    "save_dataset",
    "load_dataset",
]


class Verdict(enum.Enum):
    """Binary causal verdict between the two coordinates of a pair."""

    X_TO_Y = "x->y"
    Y_TO_X = "y->x"

    def flipped(self) -> "Verdict":
        return Verdict.Y_TO_X if self is Verdict.X_TO_Y else Verdict.X_TO_Y


@dataclass(frozen=True)
class Direction:
    """Causal verdict plus a non-negative confidence score.

    Scores are engine-specific: comparable within one engine, never across
    engines.  A score of exactly 0 marks a tie (the engine could not
    distinguish the directions).
    """

    verdict: Verdict
    score: float

    def __post_init__(self):
        if not math.isfinite(self.score) or self.score < 0:
            raise ValueError(f"score must be finite and non-negative, got {self.score}")

    @property
    def tie(self) -> bool:
        return self.score == 0.0

    def flipped(self) -> "Direction":
        return Direction(self.verdict.flipped(), self.score)


@dataclass(frozen=True)
class ScatterSample:
    """n paired scalar draws (a_i, b_i), stored as an (n, 2) float array.

    Point order carries no meaning for distribution-level consumers;
    engines that rely on that (RCC featurization) canonicalize the order
    themselves.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (n, 2), got {pts.shape}")
        if pts.shape[0] < 2:
            raise ValueError("a scatter sample needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("all coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def a(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def b(self) -> np.ndarray:
        return self.points[:, 1]

    def swapped(self) -> "ScatterSample":
        return ScatterSample(self.points[:, ::-1])

    @staticmethod
    def from_ab(a: Iterable[float], b: Iterable[float]) -> "ScatterSample":
        return ScatterSample(np.column_stack([np.asarray(a, float), np.asarray(b, float)]))


@dataclass(frozen=True)
class LabeledScatterDataset:
    """Scatter samples annotated with direction labels (+1 means x->y)."""

    items: tuple

    def __post_init__(self):
        items = tuple(self.items)
        if not items:
            raise ValueError("dataset must not be empty")
        for sample, label in items:
            if label not in (+1, -1):
                raise ValueError(f"labels must be +1 or -1, got {label}")
            if not isinstance(sample, ScatterSample):
                raise TypeError("each item must pair a ScatterSample with a label")
        object.__setattr__(self, "items", items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def labels(self) -> np.ndarray:
        return np.array([label for _, label in self.items], dtype=np.int64)


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus a documented derivation to per-task stream seeds.

    Derivation: the little-endian 8-byte master seed is concatenated with
    the UTF-8 bytes of the task id, hashed with SHA-256, and the first 8
    digest bytes (big-endian) form the 64-bit task seed.  Identical
    (master_seed, task_id) always give the same stream on any platform;
    distinct task ids give streams that behave independently.
    """

    master_seed: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in 64 unsigned bits")
        object.__setattr__(self, "master_seed", int(self.master_seed))

    def seed(self, task_id: str) -> int:
        return derive_seed(self, task_id)

    def rng(self, task_id: str) -> np.random.Generator:
        return np.random.default_rng(self.seed(task_id))

    def child(self, task_id: str) -> "SeedSpec":
        """Sub-spec whose tasks are namespaced under ``task_id``."""
        return SeedSpec(self.seed(task_id))


def derive_seed(spec: SeedSpec, task_id: str) -> int:
    """Mix a master seed with a task-id string into a 64-bit stream seed."""
    if not task_id:
        raise ValueError("task_id must be non-empty")
    payload = spec.master_seed.to_bytes(8, "little") + task_id.encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big")


# ---------------------------------------------------------------------------
# JSON-lines serialization.  Field names are part of the external interface:
# `a`, `b` for scatter points, `label` for dataset items.
# ---------------------------------------------------------------------------


def scatter_dumps(sample: ScatterSample) -> str:
    lines = [json.dumps({"a": float(a), "b": float(b)}) for a, b in sample.points]
    return "\n".join(lines) + "\n"


def scatter_loads(text: str) -> ScatterSample:
    points = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            points.append((float(rec["a"]), float(rec["b"])))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed scatter record at line {lineno}: {exc}") from None
    if not points:
        raise ValueError("empty sample")
    return ScatterSample(np.array(points, dtype=np.float64))


def save_scatter(sample: ScatterSample, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scatter_dumps(sample))


def load_scatter(path) -> ScatterSample:
    with open(path, "r", encoding="utf-8") as fh:
        return scatter_loads(fh.read())


def dataset_dumps(dataset: LabeledScatterDataset) -> str:
    lines = []
    for sample, label in dataset:
        rec = {
            "label": int(label),
            "points": [{"a": float(a), "b": float(b)} for a, b in sample.points],
        }
        lines.append(json.dumps(rec))
    return "\n".join(lines) + "\n"


def dataset_loads(text: str) -> LabeledScatterDataset:
    items = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            pts = np.array([(float(p["a"]), float(p["b"])) for p in rec["points"]])
            items.append((ScatterSample(pts), int(rec["label"])))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed dataset record at line {lineno}: {exc}") from None
    if not items:
        raise ValueError("empty dataset")
    return LabeledScatterDataset(tuple(items))


def save_dataset(dataset: LabeledScatterDataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dataset_dumps(dataset))


def load_dataset(path) -> LabeledScatterDataset:
    with open(path, "r", encoding="utf-8") as fh:
        return dataset_loads(fh.read())
