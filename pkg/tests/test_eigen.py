import numpy as np
import pytest

from mfpca.eigen import jacobi_eigen, subspace_iteration, top_k


def char_poly_eigenvalues(A):
    """Independent oracle for sizes <= 3: roots of the characteristic
    polynomial, found with numpy's polynomial root finder."""
    coeffs = np.poly(A)
    roots = np.roots(coeffs)
    return np.sort(roots.real)[::-1]


def random_symmetric(rng, n):
    G = rng.normal(size=(n, n))
    return (G + G.T) / 2


class TestWorkedExamples:
    def test_diagonal(self):
        d = jacobi_eigen(np.diag([2.0, 1.0]))
        assert np.allclose(d.eigenvalues, [2.0, 1.0])
        assert np.allclose(d.eigenvectors, np.eye(2))

    def test_exchange_matrix(self):
        d = jacobi_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(d.eigenvalues, [1.0, -1.0])
        r = 1 / np.sqrt(2)
        assert np.allclose(np.abs(d.eigenvectors), [[r, r], [r, r]])

    def test_indefinite_2x2(self):
        d = jacobi_eigen(np.array([[4.0, 6.0], [6.0, 8.0]]))
        assert np.allclose(d.eigenvalues, [6 + np.sqrt(40), 6 - np.sqrt(40)])


class TestOracleEquivalence:
    def test_small_matrices_vs_char_poly(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            n = rng.integers(1, 4)
            A = random_symmetric(rng, n)
            d = jacobi_eigen(A.copy())
            expected = char_poly_eigenvalues(A)
            assert np.allclose(d.eigenvalues, expected, rtol=1e-9, atol=1e-9)

    def test_vs_independent_implementation(self):
        # LAPACK via numpy as the second, independent solver
        rng = np.random.default_rng(43)
        for _ in range(200):
            n = rng.integers(1, 13)
            A = random_symmetric(rng, n)
            d = jacobi_eigen(A.copy())
            expected = np.sort(np.linalg.eigvalsh(A))[::-1]
            scale = max(1.0, np.abs(expected).max())
            assert np.abs(d.eigenvalues - expected).max() <= 1e-9 * scale


class TestInvariants:
    def test_orthonormality_and_reconstruction(self):
        rng = np.random.default_rng(47)
        for _ in range(200):
            n = rng.integers(1, 13)
            A = random_symmetric(rng, n)
            d = jacobi_eigen(A.copy())
            V = d.eigenvectors
            assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-10
            recon = V @ np.diag(d.eigenvalues) @ V.T
            assert np.abs(A - recon).max() <= 1e-9 * max(1.0, np.abs(A).max())
            assert np.all(np.diff(d.eigenvalues) <= 1e-12)

    def test_trace_conservation(self):
        rng = np.random.default_rng(53)
        for _ in range(100):
            n = rng.integers(1, 13)
            A = random_symmetric(rng, n)
            d = jacobi_eigen(A.copy())
            assert np.trace(A) == pytest.approx(
                d.eigenvalues.sum(), rel=1e-10, abs=1e-10
            )

    def test_determinism(self):
        rng = np.random.default_rng(59)
        A = random_symmetric(rng, 8)
        d1 = jacobi_eigen(A.copy())
        d2 = jacobi_eigen(A.copy())
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(61)
        for _ in range(25):
            n = rng.integers(2, 10)
            A = random_symmetric(rng, n)
            P = np.eye(n)[rng.permutation(n)]
            v1 = jacobi_eigen(A.copy()).eigenvalues
            v2 = jacobi_eigen(P @ A @ P.T).eigenvalues
            assert np.abs(v1 - v2).max() <= 1e-10 * max(1.0, np.abs(v1).max())

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestTopK:
    def test_full_basis(self):
        rng = np.random.default_rng(67)
        A = random_symmetric(rng, 5)
        d = jacobi_eigen(A.copy())
        assert np.array_equal(top_k(d, 5), d.eigenvectors)

    def test_diagonal_selection(self):
        d = jacobi_eigen(np.diag([3.0, 2.0, 1.0]))
        assert np.allclose(top_k(d, 2), np.eye(3)[:, :2])

    def test_dominant_eigenvector(self):
        d = jacobi_eigen(np.array([[4.0, 6.0], [6.0, 8.0]]))
        w = top_k(d, 1)[:, 0]
        lam = 6 + np.sqrt(40)
        A = np.array([[4.0, 6.0], [6.0, 8.0]])
        assert np.allclose(A @ w, lam * w)

    def test_out_of_range(self):
        d = jacobi_eigen(np.eye(3))
        with pytest.raises(ValueError):
            top_k(d, 0)
        with pytest.raises(ValueError):
            top_k(d, 4)

    def test_by_magnitude_ordering(self):
        d = jacobi_eigen(np.diag([1.0, -5.0, 3.0]))
        W = top_k(d, 1, by_magnitude=True)
        assert np.allclose(np.abs(W[:, 0]), [0, 1, 0])


class TestSubspaceIteration:
    def test_matches_jacobi_on_psd(self):
        rng = np.random.default_rng(71)
        for _ in range(20):
            n = rng.integers(3, 20)
            G = rng.normal(size=(n, n))
            A = G @ G.T
            d = jacobi_eigen(A.copy())
            k = int(rng.integers(1, min(3, n) + 1))
            vals, W = subspace_iteration(A, n, k, tol=1e-12)
            assert np.allclose(vals, d.eigenvalues[:k], rtol=1e-7, atol=1e-8)
            P1 = W @ W.T
            Wj = top_k(d, k)
            # compare projectors; individual vectors may differ on
            # near-ties
            gap = d.eigenvalues[k - 1] - (d.eigenvalues[k] if k < n else 0)
            if gap > 1e-6 * max(1.0, d.eigenvalues[0]):
                assert np.abs(P1 - Wj @ Wj.T).max() < 1e-5

    def test_indefinite_with_shift(self):
        A = np.diag([5.0, -8.0, 1.0])
        vals, W = subspace_iteration(A, 3, 2, shift=10.0, tol=1e-12)
        assert np.allclose(vals, [5.0, 1.0], atol=1e-8)

    def test_zero_operator(self):
        vals, W = subspace_iteration(np.zeros((4, 4)), 4, 2)
        assert np.array_equal(vals, [0.0, 0.0])
        assert np.allclose(W.T @ W, np.eye(2))

    def test_deterministic(self):
        rng = np.random.default_rng(73)
        G = rng.normal(size=(12, 12))
        A = G @ G.T
        v1, W1 = subspace_iteration(A, 12, 2)
        v2, W2 = subspace_iteration(A, 12, 2)
        assert np.array_equal(v1, v2)
        assert np.array_equal(W1, W2)
