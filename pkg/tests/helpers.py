"""Shared helpers for the parity and acceptance suites."""

import csv
from pathlib import Path

import numpy as np

from elab.features import compute_xy
from elab.sampling import read_design_csv

PARITY_DIR = Path(__file__).parent / "fixtures" / "parity"
LOOSE = {"ic.h_max": 1e-4, "ic.m0": 1e-4}
STRICT = 1e-6


def tolerance(feature):
    return LOOSE.get(feature, STRICT)


def rel_error(ours, ref):
    if ours is None:
        return float("inf")
    return abs(ours - ref) / max(abs(ref), 1e-300) if ref != 0 else abs(ours)


def parity_rows():
    """(problem, feature, ours, reference, relative error, tolerance) for every fixture value."""
    rows = []
    for pdir in sorted(PARITY_DIR.glob("problem*")):
        design, y = read_design_csv(pdir / "sample.csv")
        ours = compute_xy(design.points, y, 0)
        with open(pdir / "features_expected.csv", newline="") as fh:
            for rec in csv.DictReader(fh):
                ref = float(rec["value"])
                f = rec["feature"]
                rows.append((pdir.name, f, ours[f], ref, rel_error(ours[f], ref), tolerance(f)))
    return rows


def deviations():
    out = []
    for pdir in sorted(PARITY_DIR.glob("problem*")):
        with open(pdir / "deviations.csv", newline="") as fh:
            out.extend((pdir.name, r["feature"], float(r["pflacco_value"]), float(r["oracle_value"]), r["reason"])
                       for r in csv.DictReader(fh))
    return out


def write_parity_report(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["problem", "feature", "ours", "reference", "rel_error", "tolerance", "ok"])
        for p, f, ours, ref, err, tol in rows:
            w.writerow([p, f, repr(ours), repr(ref), f"{err:.3e}", tol, int(err <= tol)])
        for p, f, pf, oracle, reason in deviations():
            w.writerow([p, f, "", repr(pf), "", "", f"reference replaced by oracle {oracle!r}: {reason}"])


def max_error_by_group(rows):
    out = {}
    for _, f, _, _, err, _ in rows:
        g = f.split(".")[0]
        out[g] = max(out.get(g, 0.0), err)
    return out


def finite(a):
    return np.asarray(a, dtype=float)[np.isfinite(np.asarray(a, dtype=float))]
