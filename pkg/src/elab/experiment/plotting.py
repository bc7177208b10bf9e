"""SVG figures of a run.

Figures are built with the object-oriented Figure API (no pyplot state) and
rendered with a fixed hash salt and no date stamp, so identical input gives
byte-identical SVG.
"""

from __future__ import annotations

import io as _io
from collections import defaultdict
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from ..features import FEATURE_NAMES
from ..problems import PROBLEM_NAMES
from . import io

N_FEATURES = len(FEATURE_NAMES)
KIND_TITLES = {
    "x_translation": "search-space translation",
    "x_rotation": "search-space rotation",
    "x_scaling": "search-space scaling",
    "y_translation": "objective translation",
    "y_scaling": "objective scaling",
}
KIND_XLABEL = {
    "x_translation": "translation limit",
    "x_scaling": "scaling exponent (log2 factor)",
    "y_translation": "objective offset",
    "y_scaling": "scaling exponent (log2 factor)",
}
HEATMAP_KINDS = ("x_translation", "x_rotation", "x_scaling", "y_translation", "y_scaling")
_RC = {"svg.hashsalt": "elab", "svg.fonttype": "none", "font.size": 9}


def render_svg(fig: Figure) -> str:
    """SVG text of ``fig`` with deterministic ids and no timestamp."""
    buf = _io.StringIO()
    with matplotlib.rc_context(_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def _problem_color(p):
    return matplotlib.colormaps["tab10"](int(p) - 1)


def _rows(rows, columns):
    """Accept dict rows (from CSV) or tuples in column order."""
    out = []
    for r in rows:
        out.append(tuple(r[c] for c in columns) if isinstance(r, dict) else tuple(r))
    return out


def curve_figures(rows) -> dict:
    """One two-axis figure per transform kind.

    Solid lines: mean number of rejected features (left axis, clamped to
    [0, 55]). Dashed lines: mean EMD (right axis). One color per problem.
    """
    rows = _rows(rows, io.CURVE_COLUMNS)
    if not rows:
        raise ValueError("no curve data to plot")
    series = defaultdict(lambda: defaultdict(list))
    for p, kind, level, nrej, emd in rows:
        series[kind][int(p)].append((float(level), float(nrej), float(emd)))
    figs = {}
    for kind in sorted(series):
        fig = Figure(figsize=(5.0, 3.2))
        ax = fig.add_subplot()
        ax2 = ax.twinx()
        for p in sorted(series[kind]):
            pts = np.array(series[kind][p])
            x, nrej, emd = pts[:, 0], np.clip(pts[:, 1], 0, N_FEATURES), pts[:, 2]
            color = _problem_color(p)
            ax.plot(x, nrej, "-o", ms=3, color=color, gid=f"reject-p{p}",
                    label=f"{p}: {PROBLEM_NAMES.get(p, p)}")
            ax2.plot(x, emd, "--", color=color, gid=f"emd-p{p}")
        ax.set_ylim(0, N_FEATURES + 1)
        ax.set_xlabel(KIND_XLABEL.get(kind, "level"))
        ax.set_ylabel("rejected features (solid)")
        ax2.set_ylabel("EMD (dashed)")
        ax.set_title(KIND_TITLES.get(kind, kind))
        ax.legend(loc="best", fontsize=7)
        fig.tight_layout()
        figs[kind] = fig
    return figs


def plot_curves(rows) -> dict:
    """SVG text per transform kind."""
    return {kind: render_svg(fig) for kind, fig in curve_figures(rows).items()}


def heatmap_figure(rows, kinds=HEATMAP_KINDS):
    """Sensitivity heatmap: 55 feature rows by (problem, kind) columns.

    Returns ``(figure, matrix, column_labels)``. Brightness grows with
    sensitivity on a fixed [0, 1] scale; absent cells are NaN.
    """
    rows = _rows(rows, io.SENSITIVITY_COLUMNS)
    if not rows:
        raise ValueError("no sensitivity data to plot")
    cells = {(int(p), k, f): float(v) for p, k, f, v in rows}
    problems = sorted({key[0] for key in cells})
    present = {key[1] for key in cells}
    cols = [(p, k) for p in problems for k in kinds if k in present]
    mat = np.full((N_FEATURES, len(cols)), np.nan)
    for j, (p, k) in enumerate(cols):
        for i, f in enumerate(FEATURE_NAMES):
            mat[i, j] = cells.get((p, k, f), np.nan)

    fig = Figure(figsize=(0.22 * len(cols) + 3.6, 9.0))
    ax = fig.add_subplot()
    mesh = ax.pcolormesh(mat, cmap="viridis", vmin=0.0, vmax=1.0, edgecolors="none", gid="sensitivity")
    ax.set_yticks(np.arange(N_FEATURES) + 0.5, FEATURE_NAMES, fontsize=5)
    ax.set_xticks(np.arange(len(cols)) + 0.5, [f"{p}:{k}" for p, k in cols], rotation=90, fontsize=5)
    ax.invert_yaxis()
    fig.colorbar(mesh, ax=ax, label="sensitivity")
    fig.tight_layout()
    return fig, mat, cols


def plot_heatmap(rows) -> str:
    return render_svg(heatmap_figure(rows)[0])


def rotation_figure(rows, threshold: float = 1.0) -> Figure:
    """Box plots of diff% for features reaching ``threshold`` on some problem."""
    rows = _rows(rows, io.DIFF_COLUMNS)
    vals = defaultdict(list)
    for p, _, f, v in rows:
        if v not in ("", None):
            vals[f].append(float(v))
    shown = [f for f in FEATURE_NAMES if vals[f] and max(vals[f]) >= threshold]
    fig = Figure(figsize=(max(4.0, 0.3 * len(shown) + 2.0), 4.0))
    ax = fig.add_subplot()
    if shown:
        ax.boxplot([vals[f] for f in shown], tick_labels=shown, flierprops={"markersize": 2})
        ax.set_yscale("symlog", linthresh=1.0)
        ax.tick_params(axis="x", labelrotation=90, labelsize=6)
        ax.axhline(threshold, color="grey", lw=0.8, ls=":")
    else:
        ax.text(0.5, 0.5, f"no feature differs by {threshold:g}% or more", ha="center",
                transform=ax.transAxes)
    ax.set_ylabel("diff (%)")
    ax.set_title("rotation: relative change of feature means")
    fig.tight_layout()
    return fig


def plot_run(out_dir) -> list[Path]:
    """Render every figure of a run directory; returns the written paths."""
    out = Path(out_dir)
    written = []
    for kind, svg in plot_curves(io.read_csv(out / "curve.csv", io.CURVE_COLUMNS)).items():
        path = out / f"fig3_{kind}.svg"
        path.write_text(svg)
        written.append(path)
    diff_rows = io.read_csv(out / "diff.csv", io.DIFF_COLUMNS)
    if diff_rows:
        path = out / "fig6_rotation.svg"
        path.write_text(render_svg(rotation_figure(diff_rows)))
        written.append(path)
    path = out / "fig7_heatmap.svg"
    path.write_text(plot_heatmap(io.read_csv(out / "sensitivity.csv", io.SENSITIVITY_COLUMNS)))
    written.append(path)
    return written
