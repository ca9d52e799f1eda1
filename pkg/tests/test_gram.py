import numpy as np
import pytest

from blockseg.errors import InternalConsistencyError
from blockseg.gram import ActiveSet, CholeskyFactor, gram_entry, gram_submatrix
from blockseg.oracle import chol_from_scratch, dense_gram, materialize_design


def random_active_set(rng, n, k):
    idx = np.sort(rng.choice(n * n, size=k, replace=False) + 1)
    return ActiveSet(idx, n)


def test_gram_entry_all_ones_column():
    for n in (2, 3, 7):
        assert gram_entry(1, 1, n) == n * n


def test_gram_entry_example_n4():
    # a=6 -> (q,r)=(1,1), b=11 -> (2,2): (4-2)*(4-2) = 4
    assert gram_entry(6, 11, 4) == 4.0
    X = materialize_design(4)
    assert gram_entry(6, 11, 4) == X[:, 5] @ X[:, 10]


def test_gram_entry_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 13))
        a, b = rng.integers(1, n * n + 1, size=2)
        assert gram_entry(int(a), int(b), n) == gram_entry(int(b), int(a), n)


def test_gram_entry_out_of_range():
    with pytest.raises(IndexError):
        gram_entry(0, 1, 4)
    with pytest.raises(IndexError):
        gram_entry(1, 17, 4)


def test_gram_submatrix_singleton():
    assert gram_submatrix(ActiveSet([1], 3)).tolist() == [[9.0]]


def test_gram_submatrix_empty_rejected():
    with pytest.raises(ValueError):
        gram_submatrix(ActiveSet([], 4))


def test_gram_submatrix_matches_dense_exactly():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 13))
        k = int(rng.integers(1, min(10, n * n) + 1))
        A = random_active_set(rng, n, k)
        G = gram_submatrix(A)
        X = materialize_design(n)
        assert np.array_equal(G, dense_gram(X, A.indices))


def test_gram_submatrix_positive_definite():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 13))
        k = int(rng.integers(1, 11))
        A = random_active_set(rng, n, min(k, n * n))
        np.linalg.cholesky(gram_submatrix(A))  # raises if not SPD


def test_extend_from_empty():
    f = CholeskyFactor(5)
    f.extend(1)
    assert f.L.tolist() == [[5.0]]


def test_extend_then_drop_recovers():
    rng = np.random.default_rng(17)
    n = 10
    f = CholeskyFactor(n)
    for j in (3, 41, 77):
        f.extend(j)
    L_before = f.L.copy()
    f.extend(55)
    f.drop(55)
    assert np.allclose(f.L, L_before, atol=1e-10, rtol=0)


def test_drop_most_recent_is_exact():
    f = CholeskyFactor(8)
    for j in (2, 9, 30):
        f.extend(j)
    L_before = f.L.copy()
    f.extend(64)  # sorted position is last
    f.drop(64)
    assert np.allclose(f.L, L_before, atol=1e-12, rtol=0)


def test_drop_to_empty():
    f = CholeskyFactor(4)
    f.extend(7)
    f.drop(7)
    assert len(f) == 0 and f.L.shape == (0, 0)


def test_random_growth_matches_from_scratch():
    rng = np.random.default_rng(23)
    n = 12
    f = CholeskyFactor(n)
    pool = list(rng.permutation(n * n) + 1)
    for j in pool[:20]:
        f.extend(int(j))
        ref = chol_from_scratch(gram_submatrix(f.active_set()))
        assert np.allclose(f.L, ref, atol=1e-8, rtol=0)
        assert np.allclose(f.L @ f.L.T, gram_submatrix(f.active_set()),
                           atol=1e-8, rtol=0)


def test_drop_middle_column_matches_from_scratch():
    rng = np.random.default_rng(29)
    n = 10
    f = CholeskyFactor(n)
    idx = np.sort(rng.choice(n * n, size=5, replace=False) + 1)
    for j in idx:
        f.extend(int(j))
    f.drop(int(idx[2]))
    ref = chol_from_scratch(gram_submatrix(f.active_set()))
    assert np.allclose(f.L, ref, atol=1e-8, rtol=0)


def test_interleaved_extend_drop_sequence():
    rng = np.random.default_rng(31)
    n = 12
    f = CholeskyFactor(n)
    present = []
    for _ in range(50):
        if present and rng.random() < 0.35:
            j = int(present.pop(rng.integers(len(present))))
            f.drop(j)
        else:
            j = int(rng.integers(1, n * n + 1))
            if j in f:
                continue
            f.extend(j)
            present.append(j)
        if present:
            G = gram_submatrix(f.active_set())
            assert np.all(np.abs(f.L @ f.L.T - G) <= 1e-8)
            assert np.all(np.diag(f.L) > 0)


def test_solve_scalar_case():
    f = CholeskyFactor(4)
    f.extend(1)
    assert np.allclose(f.solve([1.0]), [1.0 / 16.0], rtol=0, atol=1e-15)


def test_solve_zero_rhs():
    f = CholeskyFactor(6)
    for j in (1, 8, 14):
        f.extend(j)
    assert not f.solve(np.zeros(3)).any()


def test_solve_residual_small():
    rng = np.random.default_rng(37)
    for _ in range(20):
        n = int(rng.integers(3, 13))
        k = int(rng.integers(1, 9))
        f = CholeskyFactor(n)
        for j in np.sort(rng.choice(n * n, size=k, replace=False) + 1):
            f.extend(int(j))
        rhs = rng.normal(size=k)
        x = f.solve(rhs)
        G = gram_submatrix(f.active_set())
        assert np.linalg.norm(G @ x - rhs) <= 1e-8 * max(1.0, np.linalg.norm(rhs))


def test_solve_dimension_mismatch():
    f = CholeskyFactor(4)
    f.extend(3)
    with pytest.raises(ValueError):
        f.solve(np.zeros(2))


def test_extend_duplicate_rejected():
    f = CholeskyFactor(4)
    f.extend(3)
    with pytest.raises(ValueError):
        f.extend(3)


def test_drop_missing_rejected():
    f = CholeskyFactor(4)
    with pytest.raises(IndexError):
        f.drop(3)


def test_downdate_pivot_collapse_raises():
    from blockseg.gram import _chol_downdate

    L = np.array([[1.0, 0.0], [0.5, 1.0]])
    with pytest.raises(InternalConsistencyError):
        _chol_downdate(L, np.array([1.0, 0.0]))


def test_no_giant_allocation_on_extend():
    import tracemalloc

    n = 1000
    f = CholeskyFactor(n)
    rng = np.random.default_rng(41)
    idx = np.sort(rng.choice(n * n, size=100, replace=False) + 1)
    tracemalloc.start()
    for j in idx:
        f.extend(int(j))
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    k = len(idx)
    assert peak <= 64 * 8 * (n * n + k * k)  # generous constant, far below n^4
