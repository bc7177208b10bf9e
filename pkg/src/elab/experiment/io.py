"""File formats of a run directory.

All CSVs carry a header row and use the column order below. Floats are
written with ``repr`` (shortest round-trip form) and missing values as the
empty string, so re-reading a file reproduces the exact values.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from pathlib import Path

import numpy as np

from ..features import FEATURE_NAMES
from ..transforms import InstanceDescriptor

FEATURES_COLUMNS = ("problem_id", "instance_index", "transform_kind", "level_label", "repetition", "feature", "value")
COMPARISON_COLUMNS = ("problem_id", "instance_index", "transform_kind", "level_label", "feature",
                      "ks_stat", "ks_p", "reject", "emd")
CURVE_COLUMNS = ("problem_id", "transform_kind", "level", "n_reject_mean", "emd_mean")
SENSITIVITY_COLUMNS = ("problem_id", "transform_kind", "feature", "sensitivity")
DIFF_COLUMNS = ("problem_id", "rotation_index", "feature", "diff_pct")
PROJECTION_COLUMNS = ("problem_id", "instance_index", "repetition", "u1", "u2")
SCALER_COLUMNS = ("feature", "min", "max")

INSUFFICIENT = "insufficient-data"


def fmt(v) -> str:
    """Canonical text for a CSV cell."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v)) if v != 0 else "0"
    return repr(v)


def parse_float(s: str):
    return None if s == "" else float(s)


def write_csv(path, columns, rows) -> None:
    """Write atomically: a temp file renamed into place."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    os.replace(tmp, path)


def read_csv(path, columns=None) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if columns is not None and tuple(reader.fieldnames or ()) != tuple(columns):
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return list(reader)


def write_json(path, obj) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(obj, indent=1, sort_keys=False) + "\n")
    os.replace(tmp, path)


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_instances(path, descriptors) -> None:
    write_json(path, [d.to_dict() for d in descriptors])


def read_instances(path) -> list[InstanceDescriptor]:
    return [InstanceDescriptor.from_dict(d) for d in json.loads(Path(path).read_text())]


def feature_rows(desc: InstanceDescriptor, repetition: int, entries: dict):
    for name in FEATURE_NAMES:
        yield (desc.problem, desc.instance_index, desc.kind, desc.level_label, repetition, name, entries[name])


class FeatureTable:
    """Feature values of a run, keyed by (problem, instance_index).

    ``values[(p, i)]`` is a (repetitions, 55) array with NaN for missing.
    """

    def __init__(self, values: dict, repetitions: int):
        self.values = values
        self.repetitions = repetitions

    @classmethod
    def read(cls, path) -> "FeatureTable":
        import pandas as pd

        df = pd.read_csv(path, dtype={"level_label": str, "transform_kind": str, "feature": str},
                         keep_default_na=False, na_values={"value": [""]}, float_precision="round_trip")
        if tuple(df.columns) != FEATURES_COLUMNS:
            raise ValueError(f"{path}: unexpected header {list(df.columns)}")
        reps = int(df["repetition"].max()) + 1 if len(df) else 0
        col = df["feature"].map({n: j for j, n in enumerate(FEATURE_NAMES)})
        if col.isna().any():
            raise ValueError(f"{path}: unknown feature names")
        values = {}
        keys = df[["problem_id", "instance_index"]].to_numpy()
        reps_arr = df["repetition"].to_numpy()
        vals = df["value"].to_numpy(dtype=float)
        cols = col.to_numpy(dtype=int)
        for key in sorted({(int(p), int(i)) for p, i in keys}):
            values[key] = np.full((reps, len(FEATURE_NAMES)), np.nan)
        for (p, i), r, c, v in zip(keys, reps_arr, cols, vals):
            values[(int(p), int(i))][r, c] = v
        return cls(values, reps)

    def stacked(self):
        """All rows as one (N, 55) array plus the (problem, instance, repetition) keys."""
        keys, blocks = [], []
        for (p, i), arr in sorted(self.values.items()):
            blocks.append(arr)
            keys.extend((p, i, r) for r in range(arr.shape[0]))
        return np.vstack(blocks), keys
