"""Statistical comparison of feature distributions.

Two-sample KS test, 1-D Wasserstein distance, global min-max normalization,
original-vs-transformed comparison reports and their aggregates (rejection
curves, sensitivity, rotation differences) and a PCA projection to 2-D.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .features import FEATURE_NAMES

MIN_SAMPLES = 10
ALPHA = 0.05


@dataclass(frozen=True)
class KsResult:
    statistic: Optional[float]
    p_value: Optional[float]
    reject: bool
    n: tuple[int, int]
    alpha: float = ALPHA
    insufficient: bool = False


def kolmogorov_sf(lam: float, tol: float = 1e-12) -> float:
    """Asymptotic Kolmogorov survival function 2 sum (-1)^(k-1) exp(-2 k^2 lam^2)."""
    if lam <= 0:
        return 1.0
    total, k = 0.0, 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < tol or k > 10000:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_statistic(a, b) -> float:
    """sup |ECDF_a - ECDF_b| evaluated at every observed value."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_2samp(a, b, alpha: float = ALPHA) -> KsResult:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_2samp needs non-empty samples")
    n = (int(a.size), int(b.size))
    if min(n) < MIN_SAMPLES:
        return KsResult(None, None, False, n, alpha, insufficient=True)
    D = ks_statistic(a, b)
    if D == 0.0:
        return KsResult(0.0, 1.0, False, n, alpha)
    p = kolmogorov_sf(D * math.sqrt(n[0] * n[1] / (n[0] + n[1])))
    return KsResult(D, p, p < alpha, n, alpha)


def wasserstein_1d(a, b) -> float:
    """W1 distance between two empirical distributions on the line.

    Integrates |F_a - F_b| between consecutive merged support points.
    """
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("wasserstein_1d needs non-empty samples")
    if a.size == b.size:
        return float(np.mean(np.abs(a - b)))
    pts = np.sort(np.concatenate([a, b]))
    widths = np.diff(pts)
    fa = np.searchsorted(a, pts[:-1], side="right") / a.size
    fb = np.searchsorted(b, pts[:-1], side="right") / b.size
    return float(np.sum(np.abs(fa - fb) * widths))


@dataclass
class Scaler:
    """Per-feature min-max scaling fitted on the whole experiment."""

    features: tuple
    mins: np.ndarray
    maxs: np.ndarray

    def transform(self, values) -> np.ndarray:
        """Scale an array whose last axis follows ``features``; NaN stays NaN."""
        values = np.asarray(values, dtype=float)
        span = self.maxs - self.mins
        safe = np.where(span > 0, span, 1.0)
        out = (values - self.mins) / safe
        out = np.where(span > 0, out, 0.0)
        return np.where(np.isnan(values), np.nan, out)

    def transform_rows(self, values) -> np.ndarray:
        """Scale a (features, observations) matrix."""
        return self.transform(np.asarray(values, dtype=float).T).T


def normalize(table, features: Sequence[str] = FEATURE_NAMES):
    """Min-max normalize ``table`` (observations x features) column-wise.

    Constant columns map to 0; NaN (missing) stays NaN. Returns the
    normalized table and the fitted :class:`Scaler`.
    """
    table = np.asarray(table, dtype=float)
    if table.size == 0:
        raise ValueError("cannot normalize an empty table")
    if table.ndim == 1:
        table = table[:, None]
    mins = np.min(np.where(np.isnan(table), np.inf, table), axis=0)
    maxs = np.max(np.where(np.isnan(table), -np.inf, table), axis=0)
    allnan = ~np.isfinite(mins)
    mins = np.where(allnan, 0.0, mins)
    maxs = np.where(allnan, 0.0, maxs)
    names = tuple(features) if len(features) == table.shape[1] else tuple(range(table.shape[1]))
    scaler = Scaler(names, mins, maxs)
    return scaler.transform(table), scaler


@dataclass(frozen=True)
class ComparisonRow:
    feature: str
    ks: KsResult
    emd: Optional[float]


@dataclass
class ComparisonReport:
    rows: list
    problem: Optional[int] = None
    instance_index: Optional[int] = None
    kind: Optional[str] = None
    level: Optional[float] = None

    @property
    def n_rejected(self) -> int:
        return sum(1 for r in self.rows if r.ks.reject)

    @property
    def mean_emd(self) -> float:
        vals = [r.emd for r in self.rows if r.emd is not None]
        return float(np.mean(vals)) if vals else float("nan")

    def rejected_features(self) -> list[str]:
        return [r.feature for r in self.rows if r.ks.reject]


def _as_matrix(data, features):
    if hasattr(data, "index") and hasattr(data, "to_numpy"):
        if tuple(data.index) != tuple(features):
            raise ValueError("feature registry mismatch")
        return data.to_numpy(dtype=float)
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != len(features):
        raise ValueError(f"expected a ({len(features)}, R) matrix, got shape {arr.shape}")
    return arr


def compare(orig, trans, scaler: Optional[Scaler] = None, alpha: float = ALPHA,
            features: Sequence[str] = FEATURE_NAMES, **meta) -> ComparisonReport:
    """Per-feature KS test (raw values) and EMD (normalized values).

    ``orig`` and ``trans`` are (features, repetitions) matrices with NaN for
    missing values; each feature drops its own missing entries. Without a
    scaler the EMD is taken on raw values.
    """
    A = _as_matrix(orig, features)
    B = _as_matrix(trans, features)
    An = scaler.transform_rows(A) if scaler is not None else A
    Bn = scaler.transform_rows(B) if scaler is not None else B
    rows = []
    for j, name in enumerate(features):
        a, b = A[j], B[j]
        ok_a, ok_b = ~np.isnan(a), ~np.isnan(b)
        if not ok_a.any() or not ok_b.any():
            rows.append(ComparisonRow(name, KsResult(None, None, False, (int(ok_a.sum()), int(ok_b.sum())), alpha, True), None))
            continue
        ks = ks_2samp(a[ok_a], b[ok_b], alpha)
        emd = wasserstein_1d(An[j][ok_a], Bn[j][ok_b])
        rows.append(ComparisonRow(name, ks, emd))
    return ComparisonReport(rows, **meta)


@dataclass(frozen=True)
class CurvePoint:
    level: float
    n_reject_mean: float
    emd_mean: float


def rejection_curve(reports_by_level: dict, grid: Optional[Sequence] = None) -> list[CurvePoint]:
    """Average rejection count and EMD per transformation level, in grid order."""
    levels = list(grid) if grid is not None else sorted(reports_by_level)
    out = []
    for level in levels:
        group = reports_by_level.get(level, [])
        if not group:
            raise ValueError(f"no reports for level {level!r}")
        out.append(CurvePoint(
            level,
            float(np.mean([r.n_rejected for r in group])),
            float(np.mean([r.mean_emd for r in group])),
        ))
    return out


@dataclass
class SensitivityMatrix:
    cells: dict = field(default_factory=dict)

    def get(self, problem, kind, feature) -> float:
        return self.cells[(problem, kind, feature)]

    def column(self, problem, kind) -> dict:
        return {f: v for (p, k, f), v in self.cells.items() if p == problem and k == kind}


def sensitivity(reports: Sequence[ComparisonReport]) -> SensitivityMatrix:
    """Fraction of transformed instances rejecting each feature, per (problem, kind)."""
    hits = defaultdict(int)
    totals = defaultdict(int)
    for rep in reports:
        for row in rep.rows:
            if row.ks.insufficient:
                continue
            key = (rep.problem, rep.kind, row.feature)
            totals[key] += 1
            hits[key] += int(row.ks.reject)
    return SensitivityMatrix({k: hits[k] / totals[k] for k in totals})


@dataclass
class DiffMatrix:
    """Relative mean differences in percent; ``defined`` is False where mean_0j = 0."""

    values: np.ndarray
    defined: np.ndarray
    features: tuple = FEATURE_NAMES

    def cell(self, i, j) -> Optional[float]:
        return float(self.values[i, j]) if self.defined[i, j] else None

    def affected(self, threshold: float = 1.0) -> list[str]:
        hit = np.any(self.defined & (np.nan_to_num(self.values, nan=-1.0) >= threshold), axis=0)
        return [f for f, h in zip(self.features, hit) if h]


def rotation_diff(means_rot, means_orig, features: Sequence[str] = FEATURE_NAMES) -> DiffMatrix:
    """|(mean_0j - mean_ij) / mean_0j| * 100 for every rotation i and feature j."""
    R = np.atleast_2d(np.asarray(means_rot, dtype=float))
    m0 = np.asarray(means_orig, dtype=float)
    defined = np.broadcast_to((m0 != 0) & np.isfinite(m0), R.shape) & np.isfinite(R)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.abs((m0 - R) / m0) * 100.0
    vals = np.where(defined, vals, np.nan)
    return DiffMatrix(vals, np.array(defined), tuple(features))


def affected_features(diffs: dict, threshold: float = 1.0) -> list[str]:
    """Features with diff >= threshold for at least one rotation on at least one problem."""
    hit = set()
    for dm in diffs.values():
        hit.update(dm.affected(threshold))
    return [f for f in FEATURE_NAMES if f in hit]


@dataclass
class Projection:
    """Linear 2-D projection fitted on a reference set of rows."""

    mean: np.ndarray
    components: np.ndarray
    fill: np.ndarray

    def transform(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=float)
        rows = np.where(np.isnan(rows), self.fill, rows)
        return (rows - self.mean) @ self.components.T


def fit_projection(fit_rows) -> Projection:
    """Principal-component projection fitted on ``fit_rows`` only.

    Missing values are filled with the fit-row column means (0 where a
    column is entirely missing). Component signs are fixed so the largest
    loading of each component is positive.
    """
    fit_rows = np.asarray(fit_rows, dtype=float)
    if fit_rows.ndim != 2 or fit_rows.shape[0] < 2:
        raise ValueError("need at least 2 rows to fit the projection")
    present = ~np.isnan(fit_rows)
    counts = present.sum(axis=0)
    sums = np.where(present, fit_rows, 0.0).sum(axis=0)
    fill = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    filled = np.where(np.isnan(fit_rows), fill, fit_rows)
    mean = filled.mean(axis=0)
    _, _, vt = np.linalg.svd(filled - mean, full_matrices=False)
    comps = np.zeros((2, fit_rows.shape[1]))
    k = min(2, vt.shape[0])
    comps[:k] = vt[:k]
    for c in comps:
        j = np.argmax(np.abs(c))
        if c[j] < 0:
            c *= -1
    return Projection(mean, comps, fill)


def project_2d(table, fit_mask) -> tuple[np.ndarray, Projection]:
    """Fit on the rows selected by ``fit_mask`` (original instances), apply to all rows."""
    table = np.asarray(table, dtype=float)
    proj = fit_projection(table[np.asarray(fit_mask, dtype=bool)])
    return proj.transform(table), proj
