import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elab import seeds
from elab.sampling import (
    NonFiniteValueError,
    design_seed,
    evaluate_design,
    lhs,
    read_design_csv,
    write_design_csv,
)
from elab.transforms import InstanceDescriptor, TransformSpec


def occupancy(points, lower, upper):
    m = points.shape[0]
    strata = np.floor((points - lower) / (upper - lower) * m).astype(int)
    strata = np.minimum(strata, m - 1)
    return np.stack([np.bincount(strata[:, j], minlength=m) for j in range(points.shape[1])])


def test_two_point_example():
    p = np.sort(lhs(2, 1, bounds=(0, 1), rng=0).points[:, 0])
    assert 0 <= p[0] < 0.5 <= p[1] <= 1


def test_lhs_property_full_size():
    d = lhs(1000, 10, rng=11)
    assert d.points.shape == (1000, 10)
    assert np.all(occupancy(d.points, -100, 100) == 1)
    assert np.all((d.points >= -100) & (d.points <= 100))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 60), st.integers(1, 6), st.integers(0, 2**32))
def test_lhs_property(m, d, seed):
    design = lhs(m, d, rng=seed)
    assert np.all(occupancy(design.points, -100, 100) == 1)


def test_lhs_determinism_and_seed():
    a, b = lhs(50, 3, rng=42), lhs(50, 3, rng=42)
    assert np.array_equal(a.points, b.points)
    assert a.seed == 42
    assert not np.array_equal(a.points, lhs(50, 3, rng=43).points)


@pytest.mark.parametrize("m,d", [(0, 2), (2, 0), (1.5, 2)])
def test_lhs_errors(m, d):
    with pytest.raises(ValueError):
        lhs(m, d)


def test_design_seed():
    assert design_seed(5, 3) == design_seed(5, 3)
    rng = np.random.default_rng(0)
    s = rng.integers(0, 2**62, 10_000)
    assert all(design_seed(int(v), 0) != design_seed(int(v), 1) for v in s)


def test_seed_streams_disjoint():
    assert seeds.design_seed(1, 2) != seeds.feature_seed(1, 2, 0)
    with pytest.raises(ValueError):
        seeds.mix(1, -2)


def test_evaluate_design_examples():
    design = lhs(1000, 10, rng=1)
    ident = evaluate_design(InstanceDescriptor(2, 0), design)
    assert ident.values.shape == (1000,)
    scaled = evaluate_design(InstanceDescriptor(2, 1, TransformSpec("y_scaling", factor_y=2.0)), design, repetition=3)
    assert np.array_equal(scaled.values, 2 * ident.values)
    assert scaled.repetition == 3


def test_evaluate_design_errors():
    with pytest.raises(ValueError):
        evaluate_design(InstanceDescriptor(1, 0, dimension=10), lhs(10, 3, rng=0))
    # 2^1200 overflows the quartic Zakharov term
    huge = InstanceDescriptor(1, 1, TransformSpec("x_scaling", factor_x=2.0**300))
    with np.errstate(over="ignore"), pytest.raises(NonFiniteValueError) as info:
        evaluate_design(huge, lhs(10, 10, rng=0))
    assert info.value.point.shape == (10,)


def test_design_csv_round_trip(tmp_path):
    design = lhs(30, 4, rng=9)
    y = np.arange(30) * 0.1
    write_design_csv(design, tmp_path / "s.csv", values=y)
    back, yb = read_design_csv(tmp_path / "s.csv")
    assert np.array_equal(back.points, design.points)
    assert np.array_equal(yb, y)
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == "x1,x2,x3,x4,y"
    write_design_csv(design, tmp_path / "d.csv")
    assert read_design_csv(tmp_path / "d.csv")[1] is None
