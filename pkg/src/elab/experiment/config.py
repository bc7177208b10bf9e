"""Experiment configuration."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    """Invalid or unreadable configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    base_seed: int = 20240601
    dimension: int = 10
    problems: tuple = (1, 2, 3, 4, 5)
    sample_multiple: int = 100
    repetitions: int = 100
    translation_limits: tuple = tuple(range(5, 101, 5))
    vectors_per_limit: int = 10
    scaling_exponents: tuple = tuple(range(-6, 7))
    rotations: int = 30
    objective_offsets: tuple = tuple(range(100, 1001, 100))
    objective_exponents: tuple = tuple(range(-6, 7))
    alpha: float = 0.05
    share_designs: bool = True
    threads: int = 1
    out_dir: str = "results"

    def __post_init__(self):
        for name in ("problems", "translation_limits", "scaling_exponents",
                     "objective_offsets", "objective_exponents"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.problems or any(p not in (1, 2, 3, 4, 5) for p in self.problems):
            raise ConfigError(f"problems must be a non-empty subset of 1..5, got {self.problems}")
        if len(set(self.problems)) != len(self.problems):
            raise ConfigError("problems contains duplicates")
        if self.dimension < 2:
            raise ConfigError("dimension must be >= 2")
        if self.repetitions < 10:
            raise ConfigError("repetitions must be >= 10 for the KS comparison")
        if self.sample_multiple < 1:
            raise ConfigError("sample_multiple must be >= 1")
        if self.base_seed < 0:
            raise ConfigError("base_seed must be non-negative")
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        for name in ("translation_limits", "scaling_exponents", "objective_offsets", "objective_exponents"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must not be empty")
        if any(limit < 0 for limit in self.translation_limits):
            raise ConfigError("translation limits must be >= 0")

    @property
    def m(self) -> int:
        return self.sample_multiple * self.dimension

    @property
    def instances_per_problem(self) -> int:
        return (1 + len(self.translation_limits) * self.vectors_per_limit + self.rotations
                + len(self.scaling_exponents) + len(self.objective_offsets)
                + len(self.objective_exponents))

    def to_dict(self) -> dict:
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, tuple):
                out[k] = list(v)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


def load_config(path) -> ExperimentConfig:
    """Read a config JSON file, or the ``config`` block of a run manifest."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(data, dict) and "config" in data and "checksums" in data:
        data = data["config"]
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return ExperimentConfig.from_dict(data)


def save_config(config: ExperimentConfig, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")


def desk_config(**overrides) -> ExperimentConfig:
    """Reduced grids for a run that fits on a desktop."""
    cfg = ExperimentConfig(
        repetitions=20,
        translation_limits=(5, 50, 100),
        vectors_per_limit=3,
        scaling_exponents=(-6, -1, 1, 6),
        rotations=5,
        objective_offsets=(100, 1000),
        objective_exponents=(-6, 6),
        out_dir="results/desk",
    )
    return cfg.with_overrides(**overrides)


def resolve_threads(config: ExperimentConfig, cli_threads=None) -> int:
    """CLI flag, then the ELAB_THREADS environment variable, then the config."""
    if cli_threads is not None:
        return int(cli_threads)
    env = os.environ.get("ELAB_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"ELAB_THREADS must be an integer, got {env!r}") from None
    return config.threads
