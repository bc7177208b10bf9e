"""Dispersion features: pairwise distances among the best points vs. all points."""

import numpy as np
from scipy.spatial.distance import pdist

from ._util import value_or_missing

QUANTILES = (0.02, 0.05, 0.10, 0.25)


def _tag(q):
    return f"{int(round(q * 100)):02d}"


NAMES = tuple(
    f"disp.{stat}_{_tag(q)}"
    for stat in ("ratio_mean", "ratio_median", "diff_mean", "diff_median")
    for q in QUANTILES
)


def disp(X, y, condensed=None) -> dict:
    """``condensed`` may carry a precomputed ``pdist(X)``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    m = y.size
    if condensed is None:
        condensed = pdist(X)
    all_mean = condensed.mean() if condensed.size else np.nan
    all_median = np.median(condensed) if condensed.size else np.nan

    # condensed index of pair (i, j), i < j
    def pair_index(idx):
        i, j = np.triu_indices(idx.size, k=1)
        a, b = idx[i], idx[j]
        return m * a - a * (a + 1) // 2 + (b - a - 1)

    out = {}
    for q in QUANTILES:
        members = np.flatnonzero(y <= np.quantile(y, q))
        if members.size < 2:
            sub_mean = sub_median = np.nan
        else:
            sub = condensed[pair_index(members)]
            sub_mean, sub_median = sub.mean(), np.median(sub)
        tag = _tag(q)
        out[f"disp.ratio_mean_{tag}"] = sub_mean / all_mean
        out[f"disp.ratio_median_{tag}"] = sub_median / all_median
        out[f"disp.diff_mean_{tag}"] = sub_mean - all_mean
        out[f"disp.diff_median_{tag}"] = sub_median - all_median
    return {n: value_or_missing(out[n]) for n in NAMES}
