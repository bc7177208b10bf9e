"""Level-set features: cross-validated discriminant analysis on quantile classes."""

import numpy as np

from ._util import missing

QUANTILES = (0.10, 0.25, 0.50)
FOLDS = 10
RIDGE = 1e-8
# reciprocal condition number below which a covariance gets the ridge
_RCOND = 1e-12


def _names():
    out = []
    for q in QUANTILES:
        tag = f"{int(round(q * 100)):d}"
        out += [f"ela_level.mmce_lda_{tag}", f"ela_level.mmce_qda_{tag}", f"ela_level.lda_qda_{tag}"]
    return tuple(out)


NAMES = _names()


def stratified_folds(labels, k, rng) -> np.ndarray:
    """Fold id per observation; each class is shuffled and dealt round-robin."""
    labels = np.asarray(labels)
    folds = np.empty(labels.size, dtype=int)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        idx = idx[rng.permutation(idx.size)]
        folds[idx] = np.arange(idx.size) % k
    return folds


def _regularize(S):
    d = S.shape[0]
    eig = np.linalg.eigvalsh(S)
    if eig[0] <= _RCOND * max(eig[-1], 0.0):
        S = S + RIDGE * np.trace(S) / d * np.eye(d)
    return S


class LDA:
    """Linear discriminant analysis with a pooled covariance matrix."""

    def fit(self, X, labels):
        self.classes_ = np.unique(labels)
        n, d = X.shape
        means, scatter = [], np.zeros((d, d))
        for cls in self.classes_:
            Xc = X[labels == cls]
            mu = Xc.mean(axis=0)
            means.append(mu)
            C = Xc - mu
            scatter += C.T @ C
        self.means_ = np.array(means)
        cov = _regularize(scatter / (n - len(self.classes_)))
        self.priors_ = np.array([np.mean(labels == c) for c in self.classes_])
        # discriminant: x' S^-1 mu_k - mu_k' S^-1 mu_k / 2 + log pi_k
        self.coef_ = np.linalg.solve(cov, self.means_.T).T
        self.intercept_ = -0.5 * np.sum(self.coef_ * self.means_, axis=1) + np.log(self.priors_)
        return self

    def decision_function(self, X):
        return X @ self.coef_.T + self.intercept_

    def predict(self, X):
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]


class QDA:
    """Quadratic discriminant analysis with per-class covariance matrices."""

    def fit(self, X, labels):
        self.classes_ = np.unique(labels)
        self.params_ = []
        for cls in self.classes_:
            Xc = X[labels == cls]
            mu = Xc.mean(axis=0)
            S = _regularize(np.cov(Xc, rowvar=False, ddof=1).reshape(X.shape[1], X.shape[1]))
            L = np.linalg.cholesky(S)
            logdet = 2.0 * np.sum(np.log(np.diag(L)))
            self.params_.append((mu, L, logdet, np.log(np.mean(labels == cls))))
        return self

    def decision_function(self, X):
        scores = []
        for mu, L, logdet, logprior in self.params_:
            z = np.linalg.solve(L, (X - mu).T)
            scores.append(-0.5 * logdet - 0.5 * np.sum(z * z, axis=0) + logprior)
        return np.array(scores).T

    def predict(self, X):
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]


def _cv_error(model_cls, X, labels, folds, k):
    errors = []
    for f in range(k):
        test = folds == f
        train = ~test
        if not test.any():
            continue
        tr_labels = labels[train]
        # every class needs enough members for a covariance estimate
        counts = [np.sum(tr_labels == c) for c in (0, 1)]
        if min(counts) < 2:
            return None
        model = model_cls().fit(X[train], tr_labels)
        errors.append(np.mean(model.predict(X[test]) != labels[test]))
    return float(np.mean(errors))


def ela_level(X, y, rng) -> dict:
    """Mean misclassification errors of 10-fold CV LDA/QDA per quantile class split.

    Points with y at or below the q-quantile form class 1. Fold assignment is
    drawn from ``rng`` (Generator or seed).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(rng)
    out = {}
    for q in QUANTILES:
        tag = f"{int(round(q * 100)):d}"
        names = (f"ela_level.mmce_lda_{tag}", f"ela_level.mmce_qda_{tag}", f"ela_level.lda_qda_{tag}")
        labels = (y <= np.quantile(y, q)).astype(int)
        if labels.min() == labels.max():
            out.update(missing(names))
            continue
        folds = stratified_folds(labels, FOLDS, rng)
        lda = _cv_error(LDA, X, labels, folds, FOLDS)
        qda = _cv_error(QDA, X, labels, folds, FOLDS)
        ratio = lda / qda if lda is not None and qda else None
        out.update(zip(names, (lda, qda, ratio)))
    return {n: out[n] for n in NAMES}
