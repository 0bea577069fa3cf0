"""
Sample covariance and generalized (multiplication-free) covariance
matrices, plus the min-kernel / Hadamard machinery used to certify that
the min-based products are valid PSD kernels.

Conventions
-----------
* Data matrices are D x N, one sample per column; no 1/N normalization
  (it does not change eigenvectors or eigenvalue order).
* The generalized covariance is A_ij = dot(row_i(X), row_j(X)) under the
  chosen kernel, the D x D analogue of X X^T.
* Only the upper triangle is computed and mirrored, so symmetry is exact
  by construction.
"""

import numpy as np
from numba import njit

from .kernels import KernelKind

__all__ = [
    "l2_covariance",
    "mf_covariance",
    "is_psd",
    "min_kernel_matrix",
    "hadamard",
    "multiplication_count",
]


def _check_data(X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError("data matrix must be 2-D with D >= 1, N >= 1")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix must be finite")
    return X


def l2_covariance(X):
    """Unnormalized sample covariance C = X X^T (D x D)."""
    X = _check_data(X)
    C = X @ X.T
    # mirror for exact symmetry, matching the MF construction
    return _mirror_upper(C)


def _mirror_upper(A):
    U = np.triu(A)
    return U + U.T - np.diag(np.diag(A))


_KIND_CODE = {
    KernelKind.MF_ADD: 0,
    KernelKind.MIN_SIGNED: 1,
    KernelKind.MIN_MATCHED: 2,
}


@njit(cache=True)
def _mf_cov_upper(X, code, out):
    D, N = X.shape
    for i in range(D):
        for j in range(i, D):
            acc = 0.0
            for n in range(N):
                w = X[i, n]
                x = X[j, n]
                sw = 0.0
                if w > 0.0:
                    sw = 1.0
                elif w < 0.0:
                    sw = -1.0
                sx = 0.0
                if x > 0.0:
                    sx = 1.0
                elif x < 0.0:
                    sx = -1.0
                aw = abs(w)
                ax = abs(x)
                if code == 0:
                    mag = aw + ax
                    if sw * sx > 0.0:
                        acc += mag
                    elif sw * sx < 0.0:
                        acc -= mag
                elif code == 1:
                    mag = aw if aw < ax else ax
                    if sw * sx > 0.0:
                        acc += mag
                    elif sw * sx < 0.0:
                        acc -= mag
                else:
                    if sw == sx:
                        acc += aw if aw < ax else ax
            out[i, j] = acc
            out[j, i] = acc


def mf_covariance(X, kind, dtype=np.float64):
    """Generalized covariance A = X (+) X^T under an MF kernel.

    Entry (i, j) is the `kind` dot product of rows i and j of X.  The
    upper triangle is computed and mirrored, so the result is exactly
    symmetric.  For kind=L2 use :func:`l2_covariance` instead.

    `dtype` controls the output storage (float32 halves the footprint of
    the D x D result for image-sized problems; accumulation is float64
    either way).
    """
    X = _check_data(X)
    kind = KernelKind(kind)
    if kind is KernelKind.L2:
        raise ValueError("use l2_covariance for the L2 kernel")
    D = X.shape[0]
    A = np.empty((D, D), dtype=np.float64)
    _mf_cov_upper(np.ascontiguousarray(X), _KIND_CODE[kind], A)
    return A.astype(dtype, copy=False)


def is_psd(A, tol=1e-8, eigensolver=None):
    """Check positive semi-definiteness of a symmetric matrix.

    Returns ``(ok, lambda_min)`` where ok is True iff
    lambda_min >= -tol * max(1, lambda_max).  The eigenvalues come from
    the in-house Jacobi solver by default; `eigensolver` may supply an
    alternative callable returning eigenvalues sorted descending.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("is_psd expects a square matrix")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max(initial=0.0))):
        raise ValueError("is_psd expects a symmetric matrix")
    if eigensolver is None:
        from .eigen import jacobi_eigen

        vals = jacobi_eigen(A).eigenvalues
    else:
        vals = np.sort(np.asarray(eigensolver(A)))[::-1]
    lam_max = vals[0]
    lam_min = vals[-1]
    ok = lam_min >= -tol * max(1.0, lam_max)
    return bool(ok), float(lam_min)


def min_kernel_matrix(x, signed):
    """Min-kernel Gram matrix of a single vector.

    unsigned (signed=False): entry (i, j) = min(x_i, x_j); requires x
    strictly positive.  signed: entry (i, j) =
    sign(x_i x_j) min(|x_i|, |x_j|), valid for any finite x.  Both are
    positive semi-definite.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("min_kernel_matrix expects a vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("min_kernel_matrix requires finite input")
    if not signed:
        if np.any(x <= 0):
            raise ValueError("unsigned min-kernel requires strictly positive entries")
        return np.minimum.outer(x, x)
    s = np.sign(x)
    M = np.minimum.outer(np.abs(x), np.abs(x))
    return np.outer(s, s) * M


def hadamard(A, B):
    """Entry-wise (Schur) product of two same-shape matrices."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValueError("hadamard: shape mismatch %s vs %s" % (A.shape, B.shape))
    return A * B


def multiplication_count(D, N, kind):
    """General multiplications needed to build the D x D covariance.

    L2 costs D*D*N multiplies; the MF kernels cost none (sign logic,
    |.|, min and addition only).
    """
    if D < 1 or N < 1:
        raise ValueError("D and N must be >= 1")
    kind = KernelKind(kind)
    return D * D * N if kind is KernelKind.L2 else 0
