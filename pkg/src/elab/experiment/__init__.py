"""Experiment orchestration: configuration, stages, persistence, figures, CLI."""

from .config import ConfigError, ExperimentConfig, desk_config, load_config, resolve_threads, save_config
from .pipeline import TaskError, run

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "TaskError",
    "desk_config",
    "load_config",
    "resolve_threads",
    "run",
    "save_config",
]
