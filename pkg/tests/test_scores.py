import numpy as np
import pytest

from vecuq import ScoreMatrix, apply_scaler, fit_scaler, stack


def test_stack_columns_become_columns():
    sm = stack([[1, 2], [3, 4]], ["a", "b"])
    assert sm.values.tolist() == [[1.0, 3.0], [2.0, 4.0]]
    assert sm.measure_names == ("a", "b")


def test_stack_single_column():
    sm = stack([[0.5]], ["only"])
    assert sm.values.shape == (1, 1)
    assert sm.values[0, 0] == 0.5


def test_stack_rejects_negative_with_column_index():
    with pytest.raises(ValueError, match="column 1"):
        stack([[0.1, 0.2], [0.3, -0.1]], ["a", "b"])


def test_stack_rejects_length_mismatch():
    with pytest.raises(ValueError, match="column 1"):
        stack([[1, 2], [1, 2, 3]], ["a", "b"])


def test_stack_rejects_non_finite():
    with pytest.raises(ValueError, match="column 0"):
        stack([[np.nan, 1.0]], ["a"])


def test_score_matrix_requires_2d_nonempty():
    with pytest.raises(ValueError):
        ScoreMatrix(np.empty((0, 2)), ("a", "b"))
    with pytest.raises(ValueError):
        ScoreMatrix(np.ones(3), ("a",))


def test_score_matrix_values_are_readonly():
    sm = stack([[1, 2]], ["a"])
    with pytest.raises(ValueError):
        sm.values[0, 0] = 9.0


def test_fit_featurewise():
    data = stack([[1, 3], [10, 30]], ["a", "b"])
    scaler = fit_scaler("featurewise", data)
    assert scaler.mins.tolist() == [1.0, 10.0]
    assert scaler.maxes.tolist() == [3.0, 30.0]


def test_fit_global_replicates():
    data = stack([[1, 3], [10, 30]], ["a", "b"])
    scaler = fit_scaler("global", data)
    assert scaler.mins.tolist() == [1.0, 1.0]
    assert scaler.maxes.tolist() == [30.0, 30.0]


def test_fit_identity_noop_parameters():
    data = stack([[5, 9]], ["a"])
    scaler = fit_scaler("identity", data)
    assert scaler.mins.tolist() == [0.0]
    assert scaler.maxes.tolist() == [1.0]


def test_apply_midpoint():
    data = stack([[1, 3], [10, 30]], ["a", "b"])
    scaler = fit_scaler("featurewise", data)
    out = apply_scaler(scaler, stack([[2.0], [20.0]], ["a", "b"]))
    assert out.values.tolist() == [[0.5, 0.5]]


def test_apply_constant_column_maps_to_zero():
    data = stack([[7, 7, 7]], ["a"])
    scaler = fit_scaler("featurewise", data)
    out = apply_scaler(scaler, data)
    assert out.values.tolist() == [[0.0], [0.0], [0.0]]


def test_apply_does_not_clip():
    data = stack([[1, 3]], ["a"])
    scaler = fit_scaler("featurewise", data)
    out = apply_scaler(scaler, stack([[5.0]], ["a"]))
    assert out.values[0, 0] == 2.0


def test_apply_dimension_mismatch():
    scaler = fit_scaler("featurewise", stack([[1, 2]], ["a"]))
    with pytest.raises(ValueError):
        apply_scaler(scaler, stack([[1, 2], [3, 4]], ["a", "b"]))


def test_featurewise_maps_nonconstant_columns_into_unit_interval():
    rng = np.random.default_rng(0)
    for _ in range(10):
        data = stack([rng.random(20) * s for s in (1, 100, 0.01)], ["a", "b", "c"])
        scaled = apply_scaler(fit_scaler("featurewise", data), data)
        assert scaled.values.min() >= 0.0
        assert scaled.values.max() <= 1.0


def test_identity_is_exact():
    rng = np.random.default_rng(1)
    data = stack([rng.random(30), rng.random(30) * 50], ["a", "b"])
    out = apply_scaler(fit_scaler("identity", data), data)
    assert np.array_equal(out.values, data.values)


def test_global_preserves_difference_ratios():
    rng = np.random.default_rng(2)
    data = stack([rng.random(25) * 3, rng.random(25) * 40 + 1], ["a", "b"])
    scaled = apply_scaler(fit_scaler("global", data), data)
    v, w = data.values, scaled.values
    a, b = v[3, 0], v[9, 1]
    c, d = v[5, 1], v[14, 0]
    before = (a - b) / (c - d)
    after = (w[3, 0] - w[9, 1]) / (w[5, 1] - w[14, 0])
    assert after == pytest.approx(before, rel=1e-9)


def test_duplicated_constant_columns_scale_to_zero():
    data = stack([[0.1, 0.9, 0.4], [2.0, 2.0, 2.0], [2.0, 2.0, 2.0]], ["s", "c1", "c2"])
    scaled = apply_scaler(fit_scaler("featurewise", data), data)
    assert np.array_equal(scaled.values[:, 1:], np.zeros((3, 2)))


def test_unknown_scaling_kind():
    with pytest.raises(ValueError):
        fit_scaler("robust", stack([[1, 2]], ["a"]))
