import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from elab import problems


def test_known_values():
    assert problems.evaluate(4, 10, np.zeros(10)) == 0.0
    assert problems.evaluate(2, 10, np.ones(10)) == 0.0
    assert problems.evaluate(2, 10, np.zeros(10)) == pytest.approx(9.0, abs=1e-12)
    assert problems.evaluate(1, 2, [1.0, 1.0]) == pytest.approx(9.3125, abs=1e-12)
    assert problems.evaluate(3, 2, [0.0, 0.0]) == 0.0


def test_zakharov_by_hand():
    x = np.array([0.3, -1.2, 2.0])
    s = 0.5 * (1 * 0.3 + 2 * -1.2 + 3 * 2.0)
    expected = np.sum(x**2) + s**2 + s**4
    assert problems.evaluate(1, 3, x) == pytest.approx(expected, rel=1e-14)


def test_levy_by_hand():
    x = np.array([2.0, -3.0])
    w = 1 + (x - 1) / 4
    expected = (np.sin(np.pi * w[0]) ** 2 + (w[0] - 1) ** 2 * (1 + 10 * np.sin(np.pi * w[0] + 1) ** 2)
                + (w[1] - 1) ** 2 * (1 + np.sin(2 * np.pi * w[1]) ** 2))
    assert problems.evaluate(5, 2, x) == pytest.approx(expected, rel=1e-13)


def test_schaffer_by_hand():
    x = np.array([1.0, 2.0, -0.5])
    s = np.sqrt(x[:-1] ** 2 + x[1:] ** 2)
    terms = np.sqrt(s) + np.sqrt(s) * np.sin(50 * s**0.2) ** 2
    expected = (terms.sum() / 2) ** 2
    assert problems.evaluate(3, 3, x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("pid", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("d", [2, 10, 20])
def test_optimum_consistency(pid, d):
    loc, val = problems.optimum(pid, d)
    assert abs(problems.evaluate(pid, d, loc) - val) <= 1e-9


def test_optimum_locations():
    assert np.array_equal(problems.optimum(4, 10)[0], np.zeros(10))
    assert np.array_equal(problems.optimum(5, 10)[0], np.ones(10))
    assert np.array_equal(problems.optimum(1, 2)[0], np.zeros(2))


def test_list_problems():
    ps = problems.list_problems()
    assert [p.id for p in ps] == [1, 2, 3, 4, 5]
    assert ps[0].name == "Zakharov"
    assert all(p.bounds == (-100.0, 100.0) for p in ps)


@pytest.mark.parametrize("bad", [0, 6, -1])
def test_unknown_problem(bad):
    with pytest.raises(ValueError):
        problems.evaluate(bad, 2, [0.0, 0.0])
    with pytest.raises(ValueError):
        problems.optimum(bad, 2)


def test_dimension_and_finiteness_errors():
    with pytest.raises(ValueError):
        problems.evaluate(1, 3, [0.0, 0.0])
    with pytest.raises(ValueError):
        problems.evaluate(1, 2, [np.nan, 0.0])
    with pytest.raises(ValueError):
        problems.evaluate(1, 2, [np.inf, 0.0])


def test_outside_box_allowed():
    assert np.isfinite(problems.evaluate(4, 10, np.full(10, 6400.0)))


@pytest.mark.parametrize("pid", [1, 2, 3, 4, 5])
def test_non_negative_and_deterministic(pid):
    X = np.random.default_rng(pid).uniform(-100, 100, (10_000, 10))
    y1 = problems.evaluate_batch(pid, 10, X)
    y2 = problems.evaluate_batch(pid, 10, X)
    assert np.all(y1 >= 0)
    assert np.array_equal(y1, y2)


@pytest.mark.parametrize("pid", [1, 2, 3, 4, 5])
def test_single_point_matches_batch(pid):
    X = np.random.default_rng(7).uniform(-100, 100, (20, 10))
    batch = problems.evaluate_batch(pid, 10, X)
    assert all(problems.evaluate(pid, 10, x) == b for x, b in zip(X, batch))


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, 10, elements=st.floats(-100, 100)))
def test_rastrigin_even(x):
    assert problems.evaluate(4, 10, x) == pytest.approx(problems.evaluate(4, 10, -x), rel=1e-12, abs=1e-12)
