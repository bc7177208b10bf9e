"""Meta-model features: least-squares fits of linear and quadratic models."""

import numpy as np
from scipy import linalg

from ._util import is_constant, missing, value_or_missing

NAMES = (
    "ela_meta.lin_simple.adj_r2",
    "ela_meta.lin_simple.intercept",
    "ela_meta.lin_simple.coef.min",
    "ela_meta.lin_simple.coef.max",
    "ela_meta.lin_simple.coef.max_by_min",
    "ela_meta.lin_w_interact.adj_r2",
    "ela_meta.quad_simple.adj_r2",
    "ela_meta.quad_simple.cond",
    "ela_meta.quad_w_interact.adj_r2",
)


def _interactions(X):
    d = X.shape[1]
    i, j = np.triu_indices(d, k=1)
    return X[:, i] * X[:, j]


def _fit(predictors, y):
    """OLS with intercept; returns (coefficients incl. intercept, adjusted R^2).

    Solved with a complete orthogonal factorization with column pivoting so
    rank-deficient designs never raise.
    """
    m, p = predictors.shape
    A = np.hstack([np.ones((m, 1)), predictors])
    coef, _, _, _ = linalg.lstsq(A, y, lapack_driver="gelsy")
    resid = y - A @ coef
    ss_res = float(resid @ resid)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    r2 = 1.0 - ss_res / ss_tot
    dof = m - p - 1
    adj = 1.0 - (1.0 - r2) * (m - 1) / dof if dof > 0 else None
    return coef, adj


def ela_meta(X, y) -> dict:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    m, d = X.shape
    if m < 2 or is_constant(y):
        return missing(NAMES)

    coef, lin_adj = _fit(X, y)
    slopes = np.abs(coef[1:])
    cmin, cmax = slopes.min(), slopes.max()
    max_by_min = cmax / cmin if cmin > 0 else None

    inter = _interactions(X)
    _, inter_adj = _fit(np.hstack([X, inter]), y)

    squares = X**2
    qcoef, quad_adj = _fit(np.hstack([X, squares]), y)
    qabs = np.abs(qcoef[d + 1 :])
    cond = qabs.max() / qabs.min() if qabs.min() > 0 else None

    # main effects + pairwise interactions + squares
    _, quad_inter_adj = _fit(np.hstack([X, inter, squares]), y)

    values = (lin_adj, coef[0], cmin, cmax, max_by_min, inter_adj, quad_adj, cond, quad_inter_adj)
    return {n: value_or_missing(v) for n, v in zip(NAMES, values)}
