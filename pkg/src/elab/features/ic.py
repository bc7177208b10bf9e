"""Information-content features along a nearest-neighbour tour."""

import math

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ._util import is_constant, missing

NAMES = ("ic.h_max", "ic.eps_s", "ic.eps_max", "ic.eps_ratio", "ic.m0")

EPSILON = np.insert(10 ** np.linspace(-5, 15, 1000), 0, 0.0)
SETTLING = 0.05
PARTIAL = 0.5


def nn_tour(D, start: int = 0) -> np.ndarray:
    """Greedy tour: from ``start`` repeatedly step to the nearest unvisited point."""
    m = D.shape[0]
    visited = np.zeros(m, dtype=bool)
    order = np.empty(m, dtype=int)
    cur = start
    for k in range(m):
        order[k] = cur
        visited[cur] = True
        if k == m - 1:
            break
        row = np.where(visited, np.inf, D[cur])
        cur = int(np.argmin(row))
    return order


def entropy_and_partial(slopes, epsilon=EPSILON):
    """H(eps) and M(eps) for every epsilon.

    Symbols are 0 where |slope| < eps, else the slope's sign. H is the
    entropy (base 6) of unequal consecutive symbol pairs; M counts sign
    changes in the zero-free symbol string, relative to the pair count.
    """
    n = slopes.size
    sign = np.sign(slopes).astype(np.int8)
    mag = np.abs(slopes)
    psi = np.where(mag[None, :] < epsilon[:, None], 0, sign[None, :]).astype(np.int8)

    codes = (psi[:, :-1] + 1) * 3 + (psi[:, 1:] + 1)
    pairs = n - 1
    H = np.zeros(epsilon.size)
    for a in (-1, 0, 1):
        for b in (-1, 0, 1):
            if a == b:
                continue
            p = np.count_nonzero(codes == (a + 1) * 3 + (b + 1), axis=1) / pairs
            with np.errstate(divide="ignore", invalid="ignore"):
                H -= np.where(p > 0, p * np.log(p) / math.log(6), 0.0)

    M = np.zeros(epsilon.size)
    for k in range(epsilon.size):
        kept = sign[mag >= epsilon[k]]
        kept = kept[kept != 0]
        M[k] = np.count_nonzero(kept[1:] != kept[:-1]) / pairs if kept.size else 0.0
    return H, M


def ic(X, y, D=None, start: int = 0) -> dict:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    m = y.size
    if m < 3:
        return missing(NAMES)
    if is_constant(y):
        return {"ic.h_max": 0.0, "ic.eps_s": None, "ic.eps_max": None, "ic.eps_ratio": None, "ic.m0": 0.0}
    if D is None:
        D = squareform(pdist(X))
    order = nn_tour(D, start)
    steps = D[order[:-1], order[1:]]
    keep = steps > 0
    slopes = np.diff(y[order])[keep] / steps[keep]
    if slopes.size < 2:
        return missing(NAMES)

    H, M = entropy_and_partial(slopes)
    h_max = float(H.max())
    settled = EPSILON[H < SETTLING]
    eps_s = math.log10(settled.min()) if settled.size and settled.min() > 0 else None
    eps_max = float(np.median(EPSILON[H == h_max]))
    m0 = float(M[0])
    informative = EPSILON[M > PARTIAL * m0]
    eps_ratio = math.log10(informative.max()) if informative.size and informative.max() > 0 else None
    return {"ic.h_max": h_max, "ic.eps_s": eps_s, "ic.eps_max": eps_max, "ic.eps_ratio": eps_ratio, "ic.m0": m0}
