"""Principal-component features of the design alone and of the design with y."""

import numpy as np

from ._util import value_or_missing

NAMES = (
    "pca.expl_var.cov_x",
    "pca.expl_var.cor_x",
    "pca.expl_var.cov_init",
    "pca.expl_var.cor_init",
    "pca.expl_var_PC1.cov_x",
    "pca.expl_var_PC1.cor_x",
    "pca.expl_var_PC1.cov_init",
    "pca.expl_var_PC1.cor_init",
)

THRESHOLD = 0.9


def _explained(matrix, threshold=THRESHOLD):
    """(components needed for ``threshold`` / columns, share of the first component)."""
    ev = np.linalg.eigvalsh(matrix)[::-1]
    total = ev.sum()
    if not total > 0:
        return None, None
    cum = np.cumsum(ev) / total
    needed = int(np.argmax(cum >= threshold)) + 1 if cum[-1] >= threshold else ev.size
    return needed / ev.size, ev[0] / total


def _variants(data):
    cov = np.atleast_2d(np.cov(data, rowvar=False, ddof=1))
    sd = np.sqrt(np.diag(cov))
    cov_res = _explained(cov)
    if np.any(sd == 0):
        return cov_res, (None, None)
    cor = cov / np.outer(sd, sd)
    return cov_res, _explained(cor)


def pca(X, y) -> dict:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] < 2:
        return {n: None for n in NAMES}
    (ev_cov_x, pc1_cov_x), (ev_cor_x, pc1_cor_x) = _variants(X)
    (ev_cov_i, pc1_cov_i), (ev_cor_i, pc1_cor_i) = _variants(np.column_stack([X, y]))
    values = (ev_cov_x, ev_cor_x, ev_cov_i, ev_cor_i, pc1_cov_x, pc1_cor_x, pc1_cov_i, pc1_cor_i)
    return {n: value_or_missing(v) for n, v in zip(NAMES, values)}
