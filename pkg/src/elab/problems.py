"""The five basic CEC2022 benchmark functions.

All functions are the raw textbook formulas, defined on all of R^d. The
canonical search box is [-100, 100]^d but evaluation is allowed anywhere,
since search-space transformations may map sample points outside the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LOWER = -100.0
UPPER = 100.0

__all__ = [
    "BenchmarkProblem",
    "LOWER",
    "UPPER",
    "PROBLEM_NAMES",
    "evaluate",
    "evaluate_batch",
    "list_problems",
    "optimum",
]


def zakharov(X):
    i = np.arange(1, X.shape[-1] + 1)
    s = np.sum(0.5 * i * X, axis=-1)
    return np.sum(X**2, axis=-1) + s**2 + s**4


def rosenbrock(X):
    head, tail = X[..., :-1], X[..., 1:]
    return np.sum(100.0 * (tail - head**2) ** 2 + (head - 1.0) ** 2, axis=-1)


def schaffer_f7(X):
    d = X.shape[-1]
    s = np.sqrt(X[..., :-1] ** 2 + X[..., 1:] ** 2)
    root = np.sqrt(s)
    terms = root + root * np.sin(50.0 * s**0.2) ** 2
    return (np.sum(terms, axis=-1) / (d - 1)) ** 2


def rastrigin(X):
    return np.sum(X**2 - 10.0 * np.cos(2.0 * np.pi * X) + 10.0, axis=-1)


def levy(X):
    w = 1.0 + (X - 1.0) / 4.0
    first = np.sin(np.pi * w[..., 0]) ** 2
    wi = w[..., :-1]
    middle = np.sum((wi - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * wi + 1.0) ** 2), axis=-1)
    wd = w[..., -1]
    last = (wd - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * wd) ** 2)
    return first + middle + last


_FUNCTIONS = {1: zakharov, 2: rosenbrock, 3: schaffer_f7, 4: rastrigin, 5: levy}

PROBLEM_NAMES = {
    1: "Zakharov",
    2: "Rosenbrock",
    3: "Schaffer F7",
    4: "Rastrigin",
    5: "Levy",
}

# problems whose raw optimum sits at the all-ones vector; the rest at the origin
_ONES_OPTIMUM = {2, 5}


@dataclass(frozen=True)
class BenchmarkProblem:
    id: int
    name: str
    dimension: int
    lower: float = LOWER
    upper: float = UPPER

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.lower, self.upper)

    @property
    def optimum_location(self) -> np.ndarray:
        return optimum(self.id, self.dimension)[0]

    @property
    def optimum_value(self) -> float:
        return optimum(self.id, self.dimension)[1]


def _check_problem(problem: int) -> int:
    try:
        pid = int(problem)
    except (TypeError, ValueError):
        raise ValueError(f"unknown problem id {problem!r}") from None
    if pid != problem or pid not in _FUNCTIONS:
        raise ValueError(f"unknown problem id {problem!r}; expected one of 1..5")
    return pid


def _check_dimension(problem: int, d: int) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    if problem == 3 and d < 2:
        raise ValueError("Schaffer F7 needs d >= 2")
    return int(d)


def evaluate_batch(problem: int, d: int, X) -> np.ndarray:
    """Evaluate a problem on the rows of an (m, d) array."""
    pid = _check_problem(problem)
    d = _check_dimension(pid, d)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != d:
        raise ValueError(f"expected an (m, {d}) array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains non-finite values")
    return _FUNCTIONS[pid](X)


def evaluate(problem: int, d: int, x) -> float:
    """Evaluate problem ``problem`` (1..5) at a single point ``x`` of length ``d``.

    Goes through the batch path so single and batched evaluation agree
    bit for bit.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D point, got shape {x.shape}")
    if x.shape[0] != d:
        raise ValueError(f"point has length {x.shape[0]}, expected {d}")
    return float(evaluate_batch(problem, d, x[None, :])[0])


def optimum(problem: int, d: int) -> tuple[np.ndarray, float]:
    """Known optimum (location, value) of the raw formula."""
    pid = _check_problem(problem)
    d = _check_dimension(pid, d)
    loc = np.ones(d) if pid in _ONES_OPTIMUM else np.zeros(d)
    return loc, 0.0


def list_problems(d: int = 10) -> list[BenchmarkProblem]:
    return [BenchmarkProblem(pid, PROBLEM_NAMES[pid], d) for pid in sorted(_FUNCTIONS)]
