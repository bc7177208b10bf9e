"""The 55-feature landscape vector.

Seven groups, computed from one evaluated sample:

=========  =====
group      count
=========  =====
ela_meta   9
ela_distr  3
ela_level  9
nbc        5
disp       16
ic         5
pca        8
=========  =====
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from . import disp as _disp
from . import distr as _distr
from . import ic as _ic
from . import level as _level
from . import meta as _meta
from . import nbc as _nbc
from . import pca as _pca
from .disp import disp
from .distr import ela_distr
from .ic import ic
from .level import ela_level
from .meta import ela_meta
from .nbc import nbc
from .pca import pca

GROUPS = {
    "ela_meta": _meta.NAMES,
    "ela_distr": _distr.NAMES,
    "ela_level": _level.NAMES,
    "nbc": _nbc.NAMES,
    "disp": _disp.NAMES,
    "ic": _ic.NAMES,
    "pca": _pca.NAMES,
}

FEATURE_NAMES: tuple[str, ...] = tuple(n for names in GROUPS.values() for n in names)
FEATURE_INDEX = {n: i for i, n in enumerate(FEATURE_NAMES)}

# features that only look at the design, never at y
X_ONLY_FEATURES = (
    "pca.expl_var.cov_x",
    "pca.expl_var.cor_x",
    "pca.expl_var_PC1.cov_x",
    "pca.expl_var_PC1.cor_x",
)

__all__ = [
    "FEATURE_NAMES",
    "FEATURE_INDEX",
    "FeatureVector",
    "GROUPS",
    "X_ONLY_FEATURES",
    "compute_all",
    "compute_xy",
    "disp",
    "ela_distr",
    "ela_level",
    "ela_meta",
    "group_of",
    "ic",
    "nbc",
    "pca",
]


def group_of(name: str) -> str:
    return name.split(".", 1)[0]


@dataclass(frozen=True)
class FeatureVector:
    """Feature values in registry order; ``None`` marks a missing value."""

    entries: dict
    descriptor: Optional[object] = None
    repetition: Optional[int] = None
    feature_seed: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if tuple(self.entries) != FEATURE_NAMES:
            raise ValueError("feature entries must follow the registry order")
        for name, v in self.entries.items():
            if v is not None and not np.isfinite(v):
                raise ValueError(f"feature {name} is not finite: {v}")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, name):
        return self.entries[name]

    def to_array(self) -> np.ndarray:
        """Values as floats with NaN for missing."""
        return np.array([np.nan if v is None else v for v in self.entries.values()])

    def missing(self) -> list[str]:
        return [n for n, v in self.entries.items() if v is None]


def compute_xy(X, y, feature_seed: int) -> dict:
    """All 55 features of ``(X, y)`` as an ordered dict."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    condensed = pdist(X)
    D = squareform(condensed)
    out = {}
    out.update(ela_meta(X, y))
    out.update(ela_distr(y))
    out.update(ela_level(X, y, np.random.default_rng(feature_seed)))
    out.update(nbc(X, y, D=D))
    out.update(disp(X, y, condensed=condensed))
    out.update(ic(X, y, D=D))
    out.update(pca(X, y))
    return {n: out[n] for n in FEATURE_NAMES}


def compute_all(sample, feature_seed: int) -> FeatureVector:
    """Feature vector of an evaluated sample.

    Only the level-set fold assignment is random; it consumes ``feature_seed``.
    """
    entries = compute_xy(sample.design.points, sample.values, feature_seed)
    return FeatureVector(entries, sample.descriptor, sample.repetition, feature_seed)
