"""Transformed problem instances.

An instance is a base problem plus exactly one transformation: translation,
scaling or rotation of the search space, or translation or scaling of the
objective value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import problems, seeds

KINDS = ("identity", "x_translation", "x_rotation", "x_scaling", "y_translation", "y_scaling")

_ORTHO_TOL = 1e-10
_DET_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class TransformSpec:
    """One transformation and its parameters.

    Only the fields belonging to ``kind`` may be set. ``level_label`` holds the
    generating grid parameter: translation limit, scaling exponent (factors are
    powers of two), rotation index or objective offset.
    """

    kind: str = "identity"
    offset: Optional[np.ndarray] = None
    factor_x: Optional[float] = None
    rotation: Optional[np.ndarray] = None
    offset_y: Optional[float] = None
    factor_y: Optional[float] = None
    level_label: Optional[float] = None

    _REQUIRED = {
        "identity": (),
        "x_translation": ("offset",),
        "x_scaling": ("factor_x",),
        "x_rotation": ("rotation",),
        "y_translation": ("offset_y",),
        "y_scaling": ("factor_y",),
    }

    def __post_init__(self):
        if self.kind not in self._REQUIRED:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        required = self._REQUIRED[self.kind]
        for name in ("offset", "factor_x", "rotation", "offset_y", "factor_y"):
            present = getattr(self, name) is not None
            if present != (name in required):
                state = "missing" if not present else "not allowed"
                raise ValueError(f"{self.kind}: field {name!r} {state}")
        if self.offset is not None:
            object.__setattr__(self, "offset", np.asarray(self.offset, dtype=float))
        if self.rotation is not None:
            R = np.asarray(self.rotation, dtype=float)
            if R.ndim != 2 or R.shape[0] != R.shape[1]:
                raise ValueError(f"rotation must be square, got shape {R.shape}")
            if np.max(np.abs(R.T @ R - np.eye(R.shape[0]))) > _ORTHO_TOL:
                raise ValueError("rotation matrix is not orthogonal")
            if abs(np.linalg.det(R) - 1.0) > _DET_TOL:
                raise ValueError("rotation matrix must have determinant +1")
            object.__setattr__(self, "rotation", R)
        if self.factor_x is not None and not self.factor_x > 0:
            raise ValueError("factor_x must be positive")
        if self.factor_y is not None and not self.factor_y > 0:
            raise ValueError("factor_y must be positive")

    def __eq__(self, other):
        if not isinstance(other, TransformSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "level_label": self.level_label,
            "offset": None if self.offset is None else self.offset.tolist(),
            "factor": self.factor_x,
            "rotation": None if self.rotation is None else self.rotation.tolist(),
            "offset_y": self.offset_y,
            "factor_y": self.factor_y,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransformSpec":
        return cls(
            kind=data["kind"],
            offset=data.get("offset"),
            factor_x=data.get("factor"),
            rotation=data.get("rotation"),
            offset_y=data.get("offset_y"),
            factor_y=data.get("factor_y"),
            level_label=data.get("level_label"),
        )


@dataclass(frozen=True)
class InstanceDescriptor:
    problem: int
    instance_index: int
    spec: TransformSpec = field(default_factory=TransformSpec)
    seed: int = 0
    dimension: int = 10

    def __post_init__(self):
        if (self.instance_index == 0) != (self.spec.kind == "identity"):
            raise ValueError("instance 0 must be the identity and vice versa")
        if self.spec.offset is not None and self.spec.offset.shape != (self.dimension,):
            raise ValueError("translation offset length does not match dimension")
        if self.spec.rotation is not None and self.spec.rotation.shape[0] != self.dimension:
            raise ValueError("rotation size does not match dimension")

    @property
    def kind(self) -> str:
        return self.spec.kind

    @property
    def level_label(self):
        return self.spec.level_label

    def to_dict(self) -> dict:
        out = {"problem": self.problem, "instance_index": self.instance_index}
        out.update(self.spec.to_dict())
        out["seed"] = self.seed
        out["dimension"] = self.dimension
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceDescriptor":
        return cls(
            problem=int(data["problem"]),
            instance_index=int(data["instance_index"]),
            spec=TransformSpec.from_dict(data),
            seed=int(data["seed"]),
            dimension=int(data["dimension"]),
        )


def random_orthogonal(d: int, rng) -> np.ndarray:
    """Haar-distributed rotation matrix (orthogonal, determinant +1).

    QR of a Gaussian matrix with the signs of R's diagonal folded into Q;
    one column is flipped when the determinant comes out negative.
    """
    if int(d) != d or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    rng = np.random.default_rng(rng)
    A = rng.standard_normal((d, d))
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    Q = Q * signs
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def sample_translation(d: int, limit: float, rng) -> np.ndarray:
    if limit < 0:
        raise ValueError(f"translation limit must be >= 0, got {limit}")
    rng = np.random.default_rng(rng)
    if limit == 0:
        return np.zeros(d)
    return rng.uniform(-limit, limit, size=d)


def instance_evaluate_batch(desc: InstanceDescriptor, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    d = desc.dimension
    if X.ndim != 2 or X.shape[1] != d:
        raise ValueError(f"expected an (m, {d}) array, got shape {X.shape}")
    spec = desc.spec
    kind = spec.kind
    if kind == "x_translation":
        X = X + spec.offset
    elif kind == "x_scaling":
        X = spec.factor_x * X
    elif kind == "x_rotation":
        X = X @ spec.rotation.T
    y = problems.evaluate_batch(desc.problem, d, X)
    if kind == "y_translation":
        y = y + spec.offset_y
    elif kind == "y_scaling":
        y = spec.factor_y * y
    return y


def instance_evaluate(desc: InstanceDescriptor, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != desc.dimension:
        raise ValueError(f"point must have length {desc.dimension}, got shape {x.shape}")
    return float(instance_evaluate_batch(desc, x[None, :])[0])


def enumerate_instances(problem: int, config, base_seed: Optional[int] = None) -> list[InstanceDescriptor]:
    """All instances of one problem, in fixed order.

    Order: identity, search-space translations (limit-major), rotations,
    search-space scalings, objective translations, objective scalings. Each
    random transform draws from its own derived stream, so the result only
    depends on (base seed, problem, kind, index).
    """
    seed0 = config.base_seed if base_seed is None else base_seed
    d = config.dimension
    grids = {
        "translation_limits": config.translation_limits,
        "scaling_exponents": config.scaling_exponents,
        "objective_offsets": config.objective_offsets,
        "objective_exponents": config.objective_exponents,
    }
    for name, grid in grids.items():
        if len(grid) == 0:
            raise ValueError(f"parameter grid {name!r} is empty")
    if config.vectors_per_limit < 1 or config.rotations < 1:
        raise ValueError("vectors_per_limit and rotations must be >= 1")

    out = [InstanceDescriptor(problem, 0, TransformSpec(), seeds.transform_seed(seed0, problem, "identity", 0), d)]

    def add(kind, index, build):
        seed = seeds.transform_seed(seed0, problem, kind, index)
        out.append(InstanceDescriptor(problem, len(out), build(seed), seed, d))

    k = 0
    for limit in config.translation_limits:
        for _ in range(config.vectors_per_limit):
            add("x_translation", k, lambda s, lim=limit: TransformSpec(
                kind="x_translation", offset=sample_translation(d, lim, s), level_label=lim))
            k += 1
    for r in range(config.rotations):
        add("x_rotation", r, lambda s, r=r: TransformSpec(
            kind="x_rotation", rotation=random_orthogonal(d, s), level_label=r))
    # deterministic kinds still get a recorded seed, keyed by grid position
    for j, e in enumerate(config.scaling_exponents):
        add("x_scaling", j, lambda s, e=int(e): TransformSpec(
            kind="x_scaling", factor_x=2.0**e, level_label=e))
    for j, dy in enumerate(config.objective_offsets):
        add("y_translation", j, lambda s, dy=dy: TransformSpec(
            kind="y_translation", offset_y=float(dy), level_label=dy))
    for j, e in enumerate(config.objective_exponents):
        add("y_scaling", j, lambda s, e=int(e): TransformSpec(
            kind="y_scaling", factor_y=2.0**e, level_label=e))
    return out
