"""Experiment stages and the end-to-end run.

A run directory holds::

    config.json          the configuration snapshot
    instances.json       every instance descriptor
    designs/rep_XXX.csv  shared LHS designs (one per repetition)
    features.journal     completed feature vectors, one line per task
    features.csv         long-format feature values
    scaler.csv           global min-max scaler
    comparison.csv       per-feature KS / EMD of every transformed instance
    curve.csv            rejection and EMD curves per transform level
    sensitivity.csv      fraction of rejecting instances per feature
    diff.csv             relative mean differences under rotation
    projection.csv       2-D PCA coordinates of every feature vector
    fig*.svg             figures
    manifest.json        config, descriptors, seed scheme, checksums

Feature computation is the only expensive stage. Its results are appended to
the journal as they complete, so an interrupted run resumes where it stopped;
``features.csv`` is then rebuilt in canonical order from the journal. All
later stages are cheap and always recomputed.
"""

from __future__ import annotations

import logging
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

import numpy as np

from .. import __version__, seeds, stats
from ..features import FEATURE_NAMES, compute_xy
from ..sampling import NonFiniteValueError, lhs, write_design_csv
from ..transforms import InstanceDescriptor, enumerate_instances, instance_evaluate_batch
from . import io
from .config import ConfigError, ExperimentConfig, load_config, resolve_threads

log = logging.getLogger(__name__)

JOURNAL = "features.journal"
CURVE_KINDS = ("x_translation", "x_scaling", "y_translation", "y_scaling")
OUTPUT_FILES = ("config.json", "instances.json", "features.csv", "scaler.csv", "comparison.csv",
                "curve.csv", "sensitivity.csv", "diff.csv", "projection.csv")
# fields that do not influence any computed value
_NEUTRAL_FIELDS = ("threads", "out_dir")

SEED_SCHEME = {
    "mix": "first 64-bit word of numpy SeedSequence(keys)",
    "design": "mix(base_seed, 1, repetition); unshared designs append (problem, instance_index)",
    "transform": "mix(base_seed, 2, problem, kind_code, index); kind codes " + str(seeds.KIND_CODES),
    "feature": "mix(base_seed, 3, problem, repetition); shared by all instances of a problem",
    "translation_vectors": "drawn independently per problem",
}


class TaskError(RuntimeError):
    """A feature task failed; names the offending (problem, instance, repetition)."""

    def __init__(self, problem, instance_index, repetition, cause):
        self.key = (problem, instance_index, repetition)
        super().__init__(f"feature task failed for problem {problem}, instance {instance_index}, "
                         f"repetition {repetition}: {cause}")


def instances(config: ExperimentConfig) -> list[InstanceDescriptor]:
    return [d for p in config.problems for d in enumerate_instances(p, config)]


def design_seed_for(config: ExperimentConfig, problem: int, instance_index: int, repetition: int) -> int:
    if config.share_designs:
        return seeds.design_seed(config.base_seed, repetition)
    return seeds.unshared_design_seed(config.base_seed, problem, instance_index, repetition)


def check_writable(out_dir) -> Path:
    """Create ``out_dir`` and prove it accepts files; raises OSError otherwise."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write_probe"
    probe.write_text("")
    probe.unlink()
    return out


def _comparable(config: ExperimentConfig) -> dict:
    d = config.to_dict()
    for k in _NEUTRAL_FIELDS:
        d.pop(k)
    return d


def prepare(config: ExperimentConfig, out_dir=None, resume: bool = True) -> Path:
    """Check the output directory and pin the config snapshot.

    A directory that already holds a run of a different configuration is
    refused, since its journal would mix incompatible feature vectors.
    """
    out = check_writable(out_dir or config.out_dir)
    snap = out / "config.json"
    if resume and snap.exists():
        old = load_config(snap)
        if _comparable(old) != _comparable(config):
            raise ConfigError(f"{out} holds a run with a different configuration; "
                              "use a fresh --out-dir or rerun without --resume")
    io.write_json(snap, config.to_dict())
    return out


# -- stages ------------------------------------------------------------------

def stage_instances(config: ExperimentConfig, out: Path) -> list[InstanceDescriptor]:
    descs = instances(config)
    io.write_instances(out / "instances.json", descs)
    return descs


def stage_sample(config: ExperimentConfig, out: Path) -> int:
    """Write the shared designs; unshared designs are regenerated from their seeds."""
    if not config.share_designs:
        return 0
    ddir = out / "designs"
    ddir.mkdir(exist_ok=True)
    for r in range(config.repetitions):
        design = lhs(config.m, config.dimension, rng=seeds.design_seed(config.base_seed, r))
        write_design_csv(design, ddir / f"rep_{r:03d}.csv")
    return config.repetitions


def feature_task(desc_dict: dict, m: int, design_seed: int, repetition: int, feature_seed: int):
    """Worker body: one feature vector. Pure; returns ``(key, values)``."""
    desc = InstanceDescriptor.from_dict(desc_dict)
    design = lhs(m, desc.dimension, rng=design_seed)
    y = instance_evaluate_batch(desc, design.points)
    if not np.all(np.isfinite(y)):
        i = int(np.flatnonzero(~np.isfinite(y))[0])
        raise NonFiniteValueError(f"non-finite value at design row {i}", design.points[i])
    entries = compute_xy(design.points, y, feature_seed)
    return (desc.problem, desc.instance_index, repetition), [entries[n] for n in FEATURE_NAMES]


def _journal_line(key, values) -> str:
    return ",".join([str(k) for k in key] + [io.fmt(v) for v in values]) + "\n"


def read_journal(path) -> dict:
    """Completed tasks of a journal. A trailing partial line is ignored."""
    path = Path(path)
    if not path.exists():
        return {}
    text = path.read_text()
    lines = text.split("\n")[:-1]  # the last piece lacks its newline unless complete
    done = {}
    width = 3 + len(FEATURE_NAMES)
    for line in lines:
        cells = line.split(",")
        if len(cells) != width:
            continue
        try:
            key = tuple(int(c) for c in cells[:3])
            vals = [None if c == "" else float(c) for c in cells[3:]]
        except ValueError:
            continue
        done[key] = vals
    return done


def _repair_journal(path, done: dict) -> None:
    """Rewrite the journal without partial lines so appends stay aligned."""
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        for key in sorted(done):
            fh.write(_journal_line(key, done[key]))
    os.replace(tmp, path)


def stage_features(config: ExperimentConfig, out: Path, threads: int = 1, resume: bool = True,
                   descriptors=None, max_tasks=None) -> dict:
    """Compute every missing feature vector and rebuild ``features.csv``.

    ``max_tasks`` stops after that many new tasks (used to simulate an
    interrupted run). Returns counts of computed and reused tasks.
    """
    descs = descriptors if descriptors is not None else instances(config)
    jpath = out / JOURNAL
    if not resume and jpath.exists():
        jpath.unlink()
    done = read_journal(jpath)
    if jpath.exists():
        _repair_journal(jpath, done)
    todo = [(d, r) for d in descs for r in range(config.repetitions)
            if (d.problem, d.instance_index, r) not in done]
    reused = len(done)
    if max_tasks is not None:
        todo = todo[:max_tasks]
    log.info("features: %d tasks to compute, %d reused", len(todo), reused)

    def args(d, r):
        return (d.to_dict(), config.m, design_seed_for(config, d.problem, d.instance_index, r), r,
                seeds.feature_seed(config.base_seed, d.problem, r))

    with open(jpath, "a") as journal:
        def collect(key, values):
            journal.write(_journal_line(key, values))
            journal.flush()
            done[key] = values

        if threads <= 1:
            for n, (d, r) in enumerate(todo, 1):
                try:
                    collect(*feature_task(*args(d, r)))
                except Exception as exc:
                    raise TaskError(d.problem, d.instance_index, r, exc) from exc
                if n % 100 == 0:
                    log.info("features: %d/%d", n, len(todo))
        else:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                futures = {pool.submit(feature_task, *args(d, r)): (d, r) for d, r in todo}
                try:
                    for n, fut in enumerate(as_completed(futures), 1):
                        d, r = futures[fut]
                        try:
                            result = fut.result()
                        except Exception as exc:
                            raise TaskError(d.problem, d.instance_index, r, exc) from exc
                        collect(*result)
                        if n % 100 == 0:
                            log.info("features: %d/%d", n, len(todo))
                except BaseException:
                    for f in futures:
                        f.cancel()
                    raise

    expected = [(d, r) for d in descs for r in range(config.repetitions)]
    if all((d.problem, d.instance_index, r) in done for d, r in expected):
        write_features_csv(out / "features.csv", descs, config.repetitions, done)
    return {"computed": len(todo), "reused": reused}


def write_features_csv(path, descs, repetitions: int, done: dict) -> None:
    def rows():
        for d in sorted(descs, key=lambda d: (d.problem, d.instance_index)):
            for r in range(repetitions):
                vals = done[(d.problem, d.instance_index, r)]
                yield from io.feature_rows(d, r, dict(zip(FEATURE_NAMES, vals)))
    io.write_csv(path, io.FEATURES_COLUMNS, rows())


def features_complete(config: ExperimentConfig, out: Path, descs=None) -> bool:
    if not (out / "features.csv").exists():
        return False
    descs = descs if descs is not None else instances(config)
    done = read_journal(out / JOURNAL)
    return all((d.problem, d.instance_index, r) in done for d in descs for r in range(config.repetitions))


def _level_sort_key(config: ExperimentConfig, kind: str):
    grid = {
        "x_translation": config.translation_limits,
        "x_scaling": config.scaling_exponents,
        "y_translation": config.objective_offsets,
        "y_scaling": config.objective_exponents,
    }.get(kind)
    if grid is None:
        return lambda level: level
    order = {float(v): i for i, v in enumerate(grid)}
    return lambda level: order[float(level)]


def stage_compare(config: ExperimentConfig, out: Path, descs=None) -> list[stats.ComparisonReport]:
    """Global scaler, per-instance comparisons and the rejection curves."""
    descs = descs if descs is not None else instances(config)
    table = io.FeatureTable.read(out / "features.csv")
    stacked, _ = table.stacked()
    _, scaler = stats.normalize(stacked)
    io.write_csv(out / "scaler.csv", io.SCALER_COLUMNS,
                 zip(FEATURE_NAMES, scaler.mins, scaler.maxs))

    reports = []
    for d in descs:
        if d.instance_index == 0:
            continue
        orig = table.values[(d.problem, 0)].T
        trans = table.values[(d.problem, d.instance_index)].T
        reports.append(stats.compare(orig, trans, scaler, config.alpha, problem=d.problem,
                                     instance_index=d.instance_index, kind=d.kind, level=d.level_label))
    io.write_csv(out / "comparison.csv", io.COMPARISON_COLUMNS, comparison_rows(reports))

    curve = []
    for p in config.problems:
        for kind in CURVE_KINDS:
            by_level = defaultdict(list)
            for rep in reports:
                if rep.problem == p and rep.kind == kind:
                    by_level[rep.level].append(rep)
            key = _level_sort_key(config, kind)
            for pt in stats.rejection_curve(by_level, sorted(by_level, key=key)):
                curve.append((p, kind, pt.level, pt.n_reject_mean, pt.emd_mean))
    io.write_csv(out / "curve.csv", io.CURVE_COLUMNS, curve)
    return reports


def comparison_rows(reports):
    for rep in reports:
        for row in rep.rows:
            reject = io.INSUFFICIENT if row.ks.insufficient else int(row.ks.reject)
            yield (rep.problem, rep.instance_index, rep.kind, rep.level, row.feature,
                   row.ks.statistic, row.ks.p_value, reject, row.emd)


def read_reports(path, alpha: float = stats.ALPHA) -> list[stats.ComparisonReport]:
    """Rebuild comparison reports from ``comparison.csv``."""
    grouped = {}
    for row in io.read_csv(path, io.COMPARISON_COLUMNS):
        key = (int(row["problem_id"]), int(row["instance_index"]))
        if key not in grouped:
            level = float(row["level_label"])
            grouped[key] = stats.ComparisonReport([], key[0], key[1], row["transform_kind"],
                                                  int(level) if level.is_integer() else level)
        insufficient = row["reject"] == io.INSUFFICIENT
        ks = stats.KsResult(io.parse_float(row["ks_stat"]), io.parse_float(row["ks_p"]),
                            (not insufficient) and row["reject"] == "1", (0, 0), alpha, insufficient)
        grouped[key].rows.append(stats.ComparisonRow(row["feature"], ks, io.parse_float(row["emd"])))
    return [grouped[k] for k in sorted(grouped)]


def stage_sensitivity(config: ExperimentConfig, out: Path, descs=None):
    """Sensitivity matrix and rotation differences."""
    descs = descs if descs is not None else instances(config)
    reports = read_reports(out / "comparison.csv", config.alpha)
    sens = stats.sensitivity(reports)
    kinds = [k for k in seeds.KIND_CODES if k != "identity"]
    rows = []
    for p in config.problems:
        for kind in kinds:
            col = sens.column(p, kind)
            rows.extend((p, kind, f, col[f]) for f in FEATURE_NAMES if f in col)
    io.write_csv(out / "sensitivity.csv", io.SENSITIVITY_COLUMNS, rows)

    table = io.FeatureTable.read(out / "features.csv")
    diffs = rotation_diffs(config, table, descs)
    drows = []
    for p, (labels, dm) in diffs.items():
        for i, label in enumerate(labels):
            drows.extend((p, label, f, dm.cell(i, j)) for j, f in enumerate(FEATURE_NAMES))
    io.write_csv(out / "diff.csv", io.DIFF_COLUMNS, drows)
    return sens, {p: dm for p, (_, dm) in diffs.items()}


def _nanmean(arr) -> np.ndarray:
    present = ~np.isnan(arr)
    counts = present.sum(axis=0)
    sums = np.where(present, arr, 0.0).sum(axis=0)
    return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def rotation_diffs(config: ExperimentConfig, table: io.FeatureTable, descs) -> dict:
    """Per problem: (rotation labels, DiffMatrix) from raw feature means."""
    out = {}
    for p in config.problems:
        rot = [d for d in descs if d.problem == p and d.kind == "x_rotation"]
        if not rot:
            continue
        m0 = _nanmean(table.values[(p, 0)])
        means = np.vstack([_nanmean(table.values[(p, d.instance_index)]) for d in rot])
        out[p] = ([d.level_label for d in rot], stats.rotation_diff(means, m0))
    return out


def stage_project(config: ExperimentConfig, out: Path):
    table = io.FeatureTable.read(out / "features.csv")
    stacked, keys = table.stacked()
    normalized, _ = stats.normalize(stacked)
    fit_mask = np.array([i == 0 for _, i, _ in keys])
    coords, proj = stats.project_2d(normalized, fit_mask)
    io.write_csv(out / "projection.csv", io.PROJECTION_COLUMNS,
                 ((p, i, r, u[0], u[1]) for (p, i, r), u in zip(keys, coords)))
    return proj


def stage_plot(config: ExperimentConfig, out: Path) -> list[Path]:
    from . import plotting

    return plotting.plot_run(out)


def write_manifest(config: ExperimentConfig, out: Path, descs=None) -> dict:
    descs = descs if descs is not None else instances(config)
    checksums = {}
    for name in OUTPUT_FILES:
        if (out / name).exists():
            checksums[name] = io.sha256(out / name)
    for svg in sorted(out.glob("fig*.svg")):
        checksums[svg.name] = io.sha256(svg)
    manifest = {
        "version": __version__,
        "config": config.to_dict(),
        "seeds": SEED_SCHEME,
        "instances": [d.to_dict() for d in descs],
        "checksums": checksums,
    }
    io.write_json(out / "manifest.json", manifest)
    return manifest


def run(config: ExperimentConfig, out_dir=None, threads=None, resume: bool = True, plot: bool = True,
        max_tasks=None) -> dict:
    """Run every stage and return the manifest.

    With ``resume`` a complete feature stage is reused and only missing
    feature vectors are computed; the downstream stages always rerun.
    ``max_tasks`` stops after that many new feature tasks, leaving the run
    resumable (no downstream output is written in that case).
    """
    out = prepare(config, out_dir, resume)
    threads = resolve_threads(config, threads)
    descs = stage_instances(config, out)
    stage_sample(config, out)
    if not (resume and features_complete(config, out, descs)):
        stage_features(config, out, threads, resume, descs, max_tasks=max_tasks)
        if not features_complete(config, out, descs):
            log.info("feature stage incomplete; rerun with resume to finish")
            return write_manifest(config, out, descs)
    else:
        log.info("features: complete, skipped")
    stage_compare(config, out, descs)
    stage_sensitivity(config, out, descs)
    stage_project(config, out)
    if plot:
        stage_plot(config, out)
    return write_manifest(config, out, descs)



def write_wide(config: ExperimentConfig, out_dir) -> Path:
    """Export ``features_wide.csv``: one row per feature vector, one column per feature."""
    out = Path(out_dir)
    table = io.FeatureTable.read(out / "features.csv")
    by_key = {(d.problem, d.instance_index): d for d in instances(config)}
    columns = io.FEATURES_COLUMNS[:5] + FEATURE_NAMES

    def rows():
        for (p, i), arr in sorted(table.values.items()):
            d = by_key[(p, i)]
            for r, vals in enumerate(arr):
                yield (p, i, d.kind, d.level_label, r, *vals)

    path = out / "features_wide.csv"
    io.write_csv(path, columns, rows())
    return path
