import numpy as np
import pytest

from blockseg.linops import apply_design, vec
from blockseg.oracle import lasso_oracle, materialize_design


def test_materialize_design_n2():
    X = materialize_design(2)
    assert X.tolist() == [
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 1.0, 0.0],
        [1.0, 1.0, 1.0, 1.0],
    ]


def test_first_column_all_ones_last_column_single_one():
    for n in (2, 5, 9):
        X = materialize_design(n)
        assert np.all(X[:, 0] == 1.0)
        last = X[:, -1]
        assert last[-1] == 1.0 and last[:-1].sum() == 0.0


def test_columns_match_matrix_free_operator():
    for n in (2, 5, 12):
        X = materialize_design(n)
        for j in range(n * n):
            e = np.zeros(n * n)
            e[j] = 1.0
            assert np.array_equal(X[:, j], apply_design(e))


def test_column_counts():
    n = 6
    X = materialize_design(n)
    for j in range(n * n):
        q, r = divmod(j, n)
        assert X[:, j].sum() == (n - q) * (n - r)


def test_size_guard():
    with pytest.raises(ValueError):
        materialize_design(33)


def test_lasso_zero_above_lambda_max():
    rng = np.random.default_rng(1)
    n = 4
    X = materialize_design(n)
    y = rng.normal(size=n * n)
    lam = 2.0 * np.max(np.abs(X.T @ y)) * 1.001
    beta = lasso_oracle(X, y, lam)
    assert not beta.any()


def test_lasso_interpolates_at_lambda_zero():
    n = 2
    X = materialize_design(n)
    U = np.array([[1.0, 1.0], [1.0, 3.0]])
    y = vec(U)
    beta = lasso_oracle(X, y, 0.0, gap_tol=1e-18)
    assert np.allclose(X @ beta, y, atol=1e-8, rtol=0)


def test_lasso_kkt_at_moderate_lambda():
    rng = np.random.default_rng(2)
    n = 6
    X = materialize_design(n)
    y = rng.normal(size=n * n)
    lam = 0.3 * 2.0 * np.max(np.abs(X.T @ y))
    beta = lasso_oracle(X, y, lam, gap_tol=1e-12)
    c = X.T @ (y - X @ beta)
    on = beta != 0
    assert np.all(np.abs(c[~on]) <= lam / 2 + 1e-6)
    if on.any():
        assert np.allclose(c[on], np.sign(beta[on]) * lam / 2, atol=1e-6, rtol=0)
