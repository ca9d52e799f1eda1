import numpy as np
import pytest

from blockseg.linops import (
    apply_design,
    apply_design_counted,
    apply_design_transpose,
    apply_design_transpose_counted,
    unvec,
    validate_matrix,
    vec,
)
from blockseg.oracle import materialize_design


def test_vec_column_stacking():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert vec(M).tolist() == [1.0, 3.0, 2.0, 4.0]


def test_vec_zero_matrix():
    assert not vec(np.zeros((3, 3))).any()


def test_unvec_example():
    assert unvec(np.array([1.0, 3.0, 2.0, 4.0]), 2).tolist() == [[1.0, 2.0], [3.0, 4.0]]


def test_unvec_zero_vector():
    assert not unvec(np.zeros(9), 3).any()


def test_vec_unvec_round_trips():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(8, 8))
    assert np.array_equal(unvec(vec(M), 8), M)
    v = rng.normal(size=25)
    assert np.array_equal(vec(unvec(v, 5)), v)


def test_unvec_length_mismatch():
    with pytest.raises(ValueError):
        unvec(np.zeros(5), 2)


def test_apply_design_first_basis_vector():
    e1 = np.zeros(4)
    e1[0] = 1.0
    assert apply_design(e1).tolist() == [1.0, 1.0, 1.0, 1.0]


def test_apply_design_zero():
    assert not apply_design(np.zeros(16)).any()


def test_apply_design_transpose_ones_n2():
    # suffix-rectangle areas of the all-ones 2x2 matrix, column-stacked
    out = apply_design_transpose(np.ones(4))
    assert out.tolist() == [4.0, 2.0, 2.0, 1.0]


def test_apply_design_transpose_zero():
    assert not apply_design_transpose(np.zeros(16)).any()


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_matches_dense_products(n):
    rng = np.random.default_rng(n)
    X = materialize_design(n)
    v = rng.normal(size=n * n)
    ref = X @ v
    got = apply_design(v)
    assert np.all(np.abs(got - ref) <= 1e-12 * (1.0 + np.abs(ref)))
    ref_t = X.T @ v
    got_t = apply_design_transpose(v)
    assert np.all(np.abs(got_t - ref_t) <= 1e-12 * (1.0 + np.abs(ref_t)))


def test_adjointness():
    rng = np.random.default_rng(7)
    for n in (2, 4, 9, 16):
        u = rng.normal(size=n * n)
        v = rng.normal(size=n * n)
        lhs = apply_design(u) @ v
        rhs = u @ apply_design_transpose(v)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@pytest.mark.parametrize("n", [2, 5, 12])
def test_operation_count_bound(n):
    rng = np.random.default_rng(n)
    v = rng.normal(size=n * n)
    out, adds = apply_design_counted(v)
    assert adds <= 2 * n * n
    assert np.allclose(out, apply_design(v), rtol=0, atol=1e-12)
    out_t, adds_t = apply_design_transpose_counted(v)
    assert adds_t <= 2 * n * n
    assert np.allclose(out_t, apply_design_transpose(v), rtol=0, atol=1e-12)


def test_non_square_length_rejected():
    with pytest.raises(ValueError):
        apply_design(np.zeros(5))
    with pytest.raises(ValueError):
        apply_design_transpose(np.zeros(7))


def test_validate_matrix_rejects_bad_inputs():
    with pytest.raises(ValueError):
        validate_matrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        validate_matrix(np.array([[1.0]]))
    bad = np.zeros((3, 3))
    bad[1, 2] = np.nan
    with pytest.raises(ValueError):
        validate_matrix(bad)
