"""Deterministic seed derivation.

Every random stream in a run is derived from the base seed plus a short key,
so any single design, transform or feature computation can be replayed in
isolation.
"""

import numpy as np

KIND_CODES = {
    "identity": 0,
    "x_translation": 1,
    "x_rotation": 2,
    "x_scaling": 3,
    "y_translation": 4,
    "y_scaling": 5,
}

# stream tags keep the design / transform / feature families disjoint
DESIGN_STREAM = 1
TRANSFORM_STREAM = 2
FEATURE_STREAM = 3


def mix(*keys: int) -> int:
    """Stable 64-bit mix of non-negative integer keys (via SeedSequence)."""
    words = [int(k) for k in keys]
    if any(k < 0 for k in words):
        raise ValueError(f"seed keys must be non-negative, got {words}")
    state = np.random.SeedSequence(words).generate_state(1, dtype=np.uint64)
    return int(state[0])


def design_seed(base_seed: int, repetition: int) -> int:
    return mix(base_seed, DESIGN_STREAM, repetition)


def transform_seed(base_seed: int, problem: int, kind: str, index: int) -> int:
    return mix(base_seed, TRANSFORM_STREAM, problem, KIND_CODES[kind], index)


def feature_seed(base_seed: int, problem: int, repetition: int) -> int:
    # instance index deliberately omitted: all instances of a problem share the
    # level-set fold assignment for a given repetition (common random numbers)
    return mix(base_seed, FEATURE_STREAM, problem, repetition)


def unshared_design_seed(base_seed: int, problem: int, instance_index: int, repetition: int) -> int:
    """Design seed when every instance draws its own designs."""
    return mix(base_seed, DESIGN_STREAM, repetition, problem, instance_index)
