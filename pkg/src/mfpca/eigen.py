"""
Symmetric eigensolvers.

``jacobi_eigen`` is a self-contained cyclic-by-row Jacobi
eigendecomposition: unconditionally stable for symmetric input, fully
deterministic (fixed sweep order, fixed eigenvector sign convention),
and fast at the moderate sizes this package needs it for (Gram matrices
of N <= a few hundred samples, test matrices).

``subspace_iteration`` computes the K dominant eigenpairs of a large
symmetric operator given only a matrix-block product, for the
image-sized problems where a full dense decomposition is out of reach.
It is plain orthogonal iteration with Rayleigh-Ritz extraction, with a
spectral shift available so "dominant" means largest algebraic
eigenvalue even for indefinite input.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["EigenDecomposition", "jacobi_eigen", "top_k", "subspace_iteration"]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending (algebraic order) with the matching
    orthonormal eigenvector columns."""

    eigenvalues: np.ndarray  # (D,) non-increasing
    eigenvectors: np.ndarray  # (D, D), column j pairs with eigenvalue j


class ConvergenceError(RuntimeError):
    """Raised when an iterative solve stops short; carries the residual."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


def _check_symmetric(A):
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, np.abs(A).max(initial=0.0))
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * scale):
        raise ValueError("expected a symmetric matrix")
    return A


def _fix_signs(V):
    # Largest-magnitude component of each eigenvector made non-negative;
    # first occurrence wins on ties, so the output is reproducible.
    for j in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, j])))
        if V[i, j] < 0:
            V[:, j] = -V[:, j]
    return V


def jacobi_eigen(A, tol=1e-12, max_sweeps=100):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi.

    Sweeps rotate away off-diagonal entries in row-major order until the
    off-diagonal Frobenius mass drops below tol * ||A||_F.  Raises
    :class:`ConvergenceError` if max_sweeps is exhausted first.
    """
    A = _check_symmetric(A)
    D = A.shape[0]
    norm_A = np.linalg.norm(A)
    V = np.eye(D)
    if D == 1 or norm_A == 0.0:
        return _sorted_decomposition(np.diag(A).copy(), V)

    def offdiag(M):
        return np.linalg.norm(M - np.diag(np.diag(M)))

    for _ in range(max_sweeps):
        if offdiag(A) <= tol * norm_A:
            break
        for p in range(D - 1):
            for q in range(p + 1, D):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                # classic Jacobi rotation choosing the smaller angle
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 1.0 / (2.0 * tau)  # asymptotic form, avoids tau**2 overflow
                elif tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                rot_p = c * V[:, p] - s * V[:, q]
                rot_q = s * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = rot_p, rot_q
    else:
        resid = offdiag(A)
        if resid > tol * norm_A:
            raise ConvergenceError(
                "Jacobi did not converge in %d sweeps (off-diagonal mass %.3e)"
                % (max_sweeps, resid),
                resid,
            )
    return _sorted_decomposition(np.diag(A).copy(), V)


def _sorted_decomposition(vals, V):
    order = np.argsort(-vals, kind="stable")
    return EigenDecomposition(vals[order], _fix_signs(V[:, order]))


def top_k(decomp, K, by_magnitude=False):
    """First K eigenvector columns (largest algebraic eigenvalues).

    `by_magnitude` reorders by |eigenvalue| instead; only relevant for
    indefinite matrices.
    """
    D = decomp.eigenvectors.shape[0]
    if not 1 <= K <= D:
        raise ValueError("K must satisfy 1 <= K <= %d, got %d" % (D, K))
    if by_magnitude:
        order = np.argsort(-np.abs(decomp.eigenvalues), kind="stable")
        return decomp.eigenvectors[:, order[:K]]
    return decomp.eigenvectors[:, :K]


def _as_matmat(op):
    if callable(op):
        return op
    A = np.asarray(op)
    # match the matrix dtype so a float32 matrix is not silently
    # promoted (and copied) to float64 on every product
    return lambda V: A @ V.astype(A.dtype, copy=False)


def subspace_iteration(
    op,
    dim,
    k,
    block=None,
    tol=1e-10,
    max_iter=2000,
    shift=0.0,
    start=None,
    check_every=10,
):
    """K dominant eigenpairs of a symmetric operator by orthogonal iteration.

    Parameters
    ----------
    op : (dim, m) -> (dim, m) callable or a dense symmetric matrix.
    dim : operator dimension.
    k : number of eigenpairs to return.
    block : iteration block size (defaults to k + 4, capped at dim).
    tol : relative change in the leading k Ritz values, checked every
        `check_every` iterations, that counts as converged.
    shift : added to the operator diagonal during iteration and removed
        from the reported eigenvalues; choose >= rho(A) to make the
        largest-magnitude eigenvalues of A + shift*I coincide with the
        largest algebraic eigenvalues of A when A is indefinite.
    start : optional (dim, >=block) deterministic starting block;
        defaults to leading identity columns.

    Returns (eigenvalues descending (k,), eigenvectors (dim, k)).
    """
    matmat = _as_matmat(op)
    if block is None:
        block = min(dim, k + 4)
    block = min(max(block, k), dim)
    if not 1 <= k <= dim:
        raise ValueError("k out of range")

    if start is None:
        Q = np.eye(dim, block)
    else:
        start = np.asarray(start, dtype=float)
        Q = np.concatenate([start, np.eye(dim, block)], axis=1)[:, : max(block, k)]
        Q, _ = np.linalg.qr(Q)
        Q = Q[:, :block]
    prev = None
    for it in range(1, max_iter + 1):
        Y = matmat(Q)
        if shift != 0.0:
            Y = Y + shift * Q
        norm_Y = np.linalg.norm(Y)
        if norm_Y == 0.0 or not np.isfinite(norm_Y):
            if norm_Y == 0.0:
                # zero operator: any orthonormal basis works, eigenvalues 0
                return np.zeros(k), Q[:, :k]
            raise ValueError("operator produced non-finite values")
        Q, _ = np.linalg.qr(Y)
        if it % check_every == 0 or it == max_iter:
            T = Q.T @ matmat(Q)
            T = 0.5 * (T + T.T)
            ritz = np.sort(np.diag(T) if block == 1 else np.linalg.eigvalsh(T))[::-1]
            lead = ritz[:k]
            if prev is not None:
                denom = max(1.0, float(np.abs(lead).max()))
                if np.abs(lead - prev).max() <= tol * denom:
                    break
            prev = lead
    # Rayleigh-Ritz extraction on the converged block
    T = Q.T @ matmat(Q)
    if shift != 0.0:
        T = T + shift * np.eye(block)
    T = 0.5 * (T + T.T)
    vals, vecs = np.linalg.eigh(T)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order] - shift
    W = Q @ vecs[:, order]
    return vals[:k], _fix_signs(W[:, :k])
