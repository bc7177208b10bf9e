"""Freeze reference feature values for the parity fixtures.

Needs pflacco and statsmodels (kept out of the package dependencies):

    /opt/pflacco-venv/bin/python tests/fixtures/make_reference.py

For every ``parity/problem*/sample.csv`` this writes ``features_expected.csv``
(feature,value) and ``deviations.csv`` listing features where the value is
taken from an independent oracle instead of pflacco, with the reason.
"""

import csv
from pathlib import Path

import numpy as np
import pandas as pd
import statsmodels.formula.api as smf
from pflacco.classical_ela_features import (
    calculate_dispersion,
    calculate_ela_distribution,
    calculate_ela_meta,
    calculate_information_content,
    calculate_nbc,
    calculate_pca,
)

HERE = Path(__file__).parent


def quad_w_interact_formula(X, y):
    """Adjusted R^2 of y ~ .^2 + I(x^2) (main effects, pairwise products, squares)."""
    cols = [f"x{j}" for j in range(X.shape[1])]
    df = pd.DataFrame(X, columns=cols)
    df["y"] = y
    rhs = "(" + " + ".join(cols) + ")**2 + " + " + ".join(f"I({c}**2)" for c in cols)
    return smf.ols("y ~ " + rhs, data=df).fit().rsquared_adj


def main():
    for sample_csv in sorted(HERE.glob("parity/problem*/sample.csv")):
        data = pd.read_csv(sample_csv)
        X = data.drop(columns="y").to_numpy()
        y = data["y"].to_numpy()
        ref = {}
        ref.update(calculate_ela_meta(X, y))
        ref.update(calculate_ela_distribution(X, y))
        ref.update(calculate_nbc(X, y))
        ref.update(calculate_dispersion(X, y))
        ref.update(calculate_information_content(X, y, ic_nn_start=0))
        ref.update(calculate_pca(X, y))
        ref = {k: float(v) for k, v in ref.items() if not k.endswith("costs_runtime") and v is not None}
        # peak counting in pflacco does not follow the mode-mass definition; not a parity target
        ref.pop("ela_distr.number_of_peaks")

        name = "ela_meta.quad_w_interact.adj_r2"
        oracle = quad_w_interact_formula(X, y)
        deviations = [(name, ref[name], oracle,
                       "pflacco multiplies all pairs of [x, x^2] columns (210 terms); "
                       "the R formula y ~ .^2 + I(x^2) has 65 terms")]
        ref[name] = float(oracle)

        out = sample_csv.parent
        with open(out / "features_expected.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["feature", "value"])
            for k, v in ref.items():
                w.writerow([k, repr(v)])
        with open(out / "deviations.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["feature", "pflacco_value", "oracle_value", "reason"])
            for row in deviations:
                w.writerow([row[0], repr(float(row[1])), repr(float(row[2])), row[3]])
        print(out.name, len(ref), "reference values")


if __name__ == "__main__":
    np.seterr(all="ignore")
    main()
