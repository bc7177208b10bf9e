import numpy as np
import pytest
from scipy.spatial.distance import pdist

from elab import problems, seeds
from elab.experiment.config import ExperimentConfig
from elab.sampling import evaluate_design, lhs
from elab.transforms import (
    InstanceDescriptor,
    TransformSpec,
    enumerate_instances,
    instance_evaluate,
    instance_evaluate_batch,
    random_orthogonal,
    sample_translation,
)


def desc(problem, spec, d=10):
    return InstanceDescriptor(problem, 0 if spec.kind == "identity" else 1, spec, 0, d)


def test_instance_examples():
    assert instance_evaluate(desc(4, TransformSpec()), np.zeros(10)) == 0.0
    assert instance_evaluate(desc(4, TransformSpec("y_translation", offset_y=100.0)), np.zeros(10)) == 100.0
    x = np.zeros(10)
    x[0] = 0.5
    assert instance_evaluate(desc(4, TransformSpec("x_scaling", factor_x=2.0)), x) == pytest.approx(1.0, abs=1e-12)
    assert instance_evaluate(desc(2, TransformSpec("y_scaling", factor_y=2.0**-6)), np.ones(10)) == 0.0


def test_translation_and_rotation_semantics():
    rng = np.random.default_rng(1)
    x = rng.uniform(-100, 100, 10)
    t = rng.uniform(-5, 5, 10)
    R = random_orthogonal(10, rng)
    assert instance_evaluate(desc(1, TransformSpec("x_translation", offset=t)), x) == problems.evaluate(1, 10, x + t)
    assert instance_evaluate(desc(1, TransformSpec("x_rotation", rotation=R)), x) == pytest.approx(
        problems.evaluate(1, 10, R @ x), rel=1e-12)


@pytest.mark.parametrize("pid", [1, 2, 3, 4, 5])
def test_identity_round_trip_bit_identical(pid):
    X = np.random.default_rng(pid).uniform(-100, 100, (50, 10))
    d = desc(pid, TransformSpec())
    assert np.array_equal(instance_evaluate_batch(d, X), problems.evaluate_batch(pid, 10, X))


@pytest.mark.parametrize("pid", [1, 2, 3, 4, 5])
def test_x_scaling_composition(pid):
    X = np.random.default_rng(pid).uniform(-100, 100, (50, 10))
    scaled = instance_evaluate_batch(desc(pid, TransformSpec("x_scaling", factor_x=2.0)), X)
    np.testing.assert_allclose(scaled, problems.evaluate_batch(pid, 10, 2 * X), rtol=1e-12)


@pytest.mark.parametrize("kind,kw", [("y_scaling", {"factor_y": 3.5}), ("y_translation", {"offset_y": 700.0})])
def test_argmin_neutrality(kind, kw):
    design = lhs(200, 10, rng=3)
    base = evaluate_design(desc(5, TransformSpec()), design)
    other = evaluate_design(desc(5, TransformSpec(kind, **kw)), design)
    assert np.argmin(base.values) == np.argmin(other.values)


def test_rotation_isometry():
    X = lhs(100, 10, rng=4).points
    R = random_orthogonal(10, np.random.default_rng(5))
    np.testing.assert_allclose(pdist(X @ R.T), pdist(X), rtol=1e-9)


def test_random_orthogonal_properties():
    for seed in range(20):
        R = random_orthogonal(10, np.random.default_rng(seed))
        assert np.max(np.abs(R.T @ R - np.eye(10))) < 1e-12
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-10)


def test_random_orthogonal_haar_first_column():
    # Under the Haar measure R e1 is uniform on the sphere: E[R_11] = 0 and E[R_11^2] = 1/d.
    rng = np.random.default_rng(0)
    vals = np.array([random_orthogonal(5, rng)[0, 0] for _ in range(4000)])
    assert abs(vals.mean()) < 0.03
    assert vals.var() == pytest.approx(1 / 5, abs=0.02)


def test_sample_translation():
    rng = np.random.default_rng(0)
    assert np.array_equal(sample_translation(10, 0, rng), np.zeros(10))
    t = sample_translation(10, 100, rng)
    assert np.all(np.abs(t) <= 100)
    big = sample_translation(100_000, 50, np.random.default_rng(1))
    assert abs(big.mean()) < 0.5
    with pytest.raises(ValueError):
        sample_translation(10, -1, rng)


@pytest.mark.parametrize("kwargs", [
    {"kind": "x_translation"},
    {"kind": "identity", "factor_x": 2.0},
    {"kind": "x_scaling", "factor_x": -1.0},
    {"kind": "y_scaling", "factor_y": 0.0},
    {"kind": "x_rotation", "rotation": np.ones((3, 3))},
    {"kind": "x_rotation", "rotation": np.diag([1.0, 1.0, -1.0])},
    {"kind": "warp"},
])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        TransformSpec(**kwargs)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        InstanceDescriptor(1, 1, TransformSpec())
    with pytest.raises(ValueError):
        InstanceDescriptor(1, 0, TransformSpec("y_translation", offset_y=1.0))
    with pytest.raises(ValueError):
        InstanceDescriptor(1, 1, TransformSpec("x_translation", offset=np.zeros(3)), dimension=10)
    with pytest.raises(ValueError):
        instance_evaluate(desc(1, TransformSpec()), np.zeros(3))


def test_default_enumeration_counts():
    descs = enumerate_instances(1, ExperimentConfig())
    assert len(descs) == 267 == 1 + 200 + 30 + 13 + 10 + 13
    kinds = [d.kind for d in descs]
    assert kinds[0] == "identity"
    assert {k: kinds.count(k) for k in set(kinds)} == {
        "identity": 1, "x_translation": 200, "x_rotation": 30,
        "x_scaling": 13, "y_translation": 10, "y_scaling": 13,
    }
    assert [d.instance_index for d in descs] == list(range(267))
    assert sorted({d.spec.factor_x for d in descs if d.kind == "x_scaling"}) == [2.0**e for e in range(-6, 7)]
    limits = [d.level_label for d in descs if d.kind == "x_translation"]
    assert limits == [lim for lim in range(5, 101, 5) for _ in range(10)]
    for d in descs:
        if d.kind == "x_translation":
            assert np.all(np.abs(d.spec.offset) <= d.level_label)


def test_translation_only_count():
    cfg = ExperimentConfig(translation_limits=(5,), rotations=1, scaling_exponents=(0,),
                           objective_offsets=(100,), objective_exponents=(0,))
    descs = enumerate_instances(2, cfg)
    assert sum(d.kind in ("identity", "x_translation") for d in descs) == 11


def test_enumeration_deterministic_and_per_problem():
    cfg = ExperimentConfig()
    a, b = enumerate_instances(3, cfg), enumerate_instances(3, cfg)
    assert [x.to_dict() for x in a] == [x.to_dict() for x in b]
    other = enumerate_instances(4, cfg)
    assert not np.array_equal(a[1].spec.offset, other[1].spec.offset)
    assert a[1].seed == seeds.transform_seed(cfg.base_seed, 3, "x_translation", 0)


def test_enumeration_empty_grid():
    class Cfg:
        base_seed, dimension, vectors_per_limit, rotations = 1, 10, 1, 1
        translation_limits, scaling_exponents, objective_offsets, objective_exponents = (), (0,), (1,), (0,)
    with pytest.raises(ValueError):
        enumerate_instances(1, Cfg())


def test_descriptor_json_round_trip():
    for d in enumerate_instances(5, ExperimentConfig(rotations=2, translation_limits=(5,), vectors_per_limit=2)):
        back = InstanceDescriptor.from_dict(d.to_dict())
        assert back.to_dict() == d.to_dict()
        X = np.random.default_rng(0).uniform(-100, 100, (5, 10))
        assert np.array_equal(instance_evaluate_batch(back, X), instance_evaluate_batch(d, X))
