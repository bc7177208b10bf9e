"""Nearest-better clustering features."""

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ._util import missing, pearson, value_or_missing

NAMES = (
    "nbc.nn_nb.sd_ratio",
    "nbc.nn_nb.mean_ratio",
    "nbc.nn_nb.cor",
    "nbc.dist_ratio.coeff_var",
    "nbc.nb_fitness.cor",
)


def nearest_better(D, y):
    """Nearest-neighbour and nearest-better distances plus the indegree vector.

    A point with no strictly better neighbour falls back to its nearest
    equal-valued neighbour; the sample best (no such neighbour either) takes
    its nearest-neighbour distance and selects nobody.
    """
    m = y.size
    D = D.copy()
    np.fill_diagonal(D, np.inf)
    nn = D.min(axis=1)

    better = y[None, :] < y[:, None]
    nb_idx = np.argmin(np.where(better, D, np.inf), axis=1)
    has_better = better.any(axis=1)

    nb = np.where(has_better, D[np.arange(m), nb_idx], np.nan)
    target = np.where(has_better, nb_idx, -1)
    for i in np.flatnonzero(~has_better):
        ties = np.flatnonzero((y == y[i]) & (np.arange(m) != i))
        if ties.size:
            j = ties[np.argmin(D[i, ties])]
            nb[i], target[i] = D[i, j], j
        else:
            nb[i] = nn[i]
    indegree = np.bincount(target[target >= 0], minlength=m)
    return nn, nb, indegree


def nbc(X, y, D=None) -> dict:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    m = y.size
    if m < 3 or np.unique(y).size < 2:
        return missing(NAMES)
    if D is None:
        D = squareform(pdist(X))
    nn, nb, indegree = nearest_better(D, y)

    sd_nb = np.std(nb, ddof=1)
    sd_ratio = np.std(nn, ddof=1) / sd_nb if sd_nb > 0 else None
    mean_ratio = nn.mean() / nb.mean() if nb.mean() > 0 else None
    ratio = nn / nb
    coeff_var = np.std(ratio, ddof=1) / np.mean(ratio) if m > 1 else None
    values = (sd_ratio, mean_ratio, pearson(nn, nb), coeff_var, pearson(indegree, y))
    return {n: value_or_missing(v) for n, v in zip(NAMES, values)}
