import math

import numpy as np


def value_or_missing(v):
    """Finite float, or None for missing."""
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def missing(names):
    return {n: None for n in names}


def pearson(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
    if denom == 0.0:
        return None
    return float(np.dot(da, db)) / denom


def is_constant(y) -> bool:
    return bool(np.all(y == y[0]))
