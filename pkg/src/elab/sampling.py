"""Latin hypercube designs and their evaluation under an instance."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import problems
from .seeds import design_seed
from .transforms import InstanceDescriptor, instance_evaluate_batch

__all__ = [
    "Design",
    "EvaluatedSample",
    "NonFiniteValueError",
    "design_seed",
    "evaluate_design",
    "lhs",
    "read_design_csv",
    "write_design_csv",
]


class NonFiniteValueError(RuntimeError):
    """An instance produced a non-finite objective value."""

    def __init__(self, message, point):
        super().__init__(message)
        self.point = point


@dataclass(frozen=True, eq=False)
class Design:
    points: np.ndarray
    bounds: tuple[float, float] = (problems.LOWER, problems.UPPER)
    seed: int = 0

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True, eq=False)
class EvaluatedSample:
    design: Design
    values: np.ndarray
    descriptor: InstanceDescriptor
    repetition: int = 0

    @property
    def X(self) -> np.ndarray:
        return self.design.points

    @property
    def y(self) -> np.ndarray:
        return self.values


def lhs(m: int, d: int, bounds=(problems.LOWER, problems.UPPER), rng=None) -> Design:
    """Classic jittered Latin hypercube of ``m`` points in a ``d``-dim box.

    Each axis gets an independent random permutation of the m strata and a
    uniform jitter inside each stratum. ``rng`` may be a Generator or a seed;
    only an integer seed is recorded on the returned design.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    if int(d) != d or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    lower, upper = float(bounds[0]), float(bounds[1])
    if not upper > lower:
        raise ValueError(f"invalid bounds {bounds!r}")
    seed = int(rng) if isinstance(rng, (int, np.integer)) else 0
    gen = np.random.default_rng(rng)
    strata = np.empty((m, d))
    for j in range(d):
        strata[:, j] = gen.permutation(m)
    unit = (strata + gen.random((m, d))) / m
    points = lower + unit * (upper - lower)
    # guard the upper edge against rounding
    np.clip(points, lower, upper, out=points)
    return Design(points, (lower, upper), seed)


def evaluate_design(desc: InstanceDescriptor, design: Design, repetition: int = 0) -> EvaluatedSample:
    if design.d != desc.dimension:
        raise ValueError(f"design has dimension {design.d}, instance expects {desc.dimension}")
    values = instance_evaluate_batch(desc, design.points)
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteValueError(
            f"problem {desc.problem} instance {desc.instance_index} gave {values[i]} "
            f"at design row {i}: {design.points[i].tolist()}",
            design.points[i].copy(),
        )
    return EvaluatedSample(design, values, desc, repetition)


def write_design_csv(design: Design, path, values=None) -> None:
    """Write a design as CSV with header x1..xd (plus y when values are given)."""
    header = [f"x{j + 1}" for j in range(design.d)]
    if values is not None:
        header.append("y")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, row in enumerate(design.points):
            cells = [repr(float(v)) for v in row]
            if values is not None:
                cells.append(repr(float(values[i])))
            w.writerow(cells)


def read_design_csv(path, bounds=(problems.LOWER, problems.UPPER)):
    """Read a CSV written by :func:`write_design_csv`.

    Returns ``(design, y)`` where ``y`` is None unless the file has a y column.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in r] for r in body], dtype=float)
    if header[-1] == "y":
        return Design(data[:, :-1].copy(), tuple(bounds)), data[:, -1].copy()
    return Design(data, tuple(bounds)), None
