"""
PCA on generalized covariance matrices: fit, project/reconstruct, and
ground-truth-assisted mean selection for the denoising experiments.

The fit pipeline is: center the columns by a chosen mean vector, build
the covariance for the selected kernel, take the K eigenvectors of
largest algebraic eigenvalue.  Reconstruction is the ordinary orthogonal
projection W W^T (v - mean) + mean; the multiplication-free arithmetic
lives only in the covariance construction.

Solver strategy:

* L2 with D > N uses the Gram trick (eigendecompose the N x N matrix
  X^T X and map eigenvectors through X) -- exact for the Euclidean
  kernel only.
* MF kernels at small D decompose the dense covariance with the cyclic
  Jacobi solver.
* MF kernels at image scale (D up to 16384 here) use the matrix-free
  operator from :mod:`mfpca.operators` with deterministic subspace
  iteration; the min kernels do not factor, so there is no Gram trick
  for them, but their covariance can still be *applied* exactly in
  O(N D log D) per product.
"""

from dataclasses import dataclass
import enum

import numpy as np

from . import covariance as cov
from .eigen import jacobi_eigen, subspace_iteration, top_k
from .kernels import KernelKind
from .operators import MfCovarianceOperator

__all__ = ["MeanMode", "PcaModel", "fit", "reconstruct", "fit_best_mean"]

# above this dimension the dense Jacobi decomposition of an MF
# covariance is replaced by matrix-free subspace iteration
DENSE_EIGEN_MAX_DIM = 256

_DEGENERATE_EIGVAL = 1e-12


class MeanMode(enum.Enum):
    ZERO = "zero"
    HALF = "half"
    SAMPLE_MEAN = "sample"
    BEST_OF_THREE = "best"


_CONCRETE_MODES = (MeanMode.ZERO, MeanMode.HALF, MeanMode.SAMPLE_MEAN)


@dataclass(frozen=True)
class PcaModel:
    W: np.ndarray  # (D, K) orthonormal principal directions
    mean: np.ndarray  # (D,) centering vector
    kind: KernelKind
    eigenvalues: np.ndarray  # (K,) descending


def resolve_mean(X, mode):
    """Concrete centering vector for a data matrix."""
    mode = MeanMode(mode)
    D = X.shape[0]
    if mode is MeanMode.ZERO:
        return np.zeros(D)
    if mode is MeanMode.HALF:
        return np.full(D, 0.5)
    if mode is MeanMode.SAMPLE_MEAN:
        return X.mean(axis=1)
    raise ValueError("fit requires a concrete mean mode, not %s" % mode)


def _complete_basis(W, D, K):
    """Pad W with deterministic orthonormal columns up to K (needed when
    the covariance is rank-deficient, e.g. perfectly clean data after
    mean centering)."""
    if W.shape[1] >= K:
        return W[:, :K]
    candidates = np.eye(D)
    have = W.shape[1]
    basis = W
    for j in range(D):
        if have >= K:
            break
        v = candidates[:, j]
        if basis.shape[1]:
            v = v - basis @ (basis.T @ v)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            v = v / norm
            basis = np.column_stack([basis, v]) if basis.shape[1] else v[:, None]
            have += 1
    return basis[:, :K]


def _fit_l2(Xc, K):
    D, N = Xc.shape
    if D > N:
        # Gram trick: eigenvectors of X X^T from the N x N Gram matrix
        G = Xc.T @ Xc
        decomp = jacobi_eigen(G)
        vals = decomp.eigenvalues
        lam_max = max(vals[0], 0.0)
        cols = []
        kept_vals = []
        for j in range(N):
            if vals[j] <= _DEGENERATE_EIGVAL * max(1.0, lam_max):
                break
            w = Xc @ decomp.eigenvectors[:, j]
            cols.append(w / np.linalg.norm(w))
            kept_vals.append(vals[j])
        W = np.column_stack(cols) if cols else np.zeros((D, 0))
        if W.shape[1]:
            W, _ = np.linalg.qr(W)  # tidy up orthonormality
        W = _complete_basis(W, D, K)
        eigvals = np.array(kept_vals[:K] + [0.0] * max(0, K - len(kept_vals)))
        return W, eigvals
    decomp = jacobi_eigen(cov.l2_covariance(Xc))
    return top_k(decomp, K), decomp.eigenvalues[:K]


def _fit_mf(Xc, K, kind, dense_max_dim):
    D = Xc.shape[0]
    if D <= dense_max_dim:
        A = cov.mf_covariance(Xc, kind)
        decomp = jacobi_eigen(A)
        return top_k(decomp, K), decomp.eigenvalues[:K]
    op = MfCovarianceOperator(Xc, kind)
    shift = 0.0
    if kind is KernelKind.MF_ADD:
        # indefinite: shift so dominant-by-magnitude = largest algebraic
        shift = op.spectral_radius_bound()
    # warm start from the span of the centered data
    U, _, _ = np.linalg.svd(Xc, full_matrices=False)
    vals, W = subspace_iteration(
        op.matmat, D, K, shift=shift, start=U, tol=1e-10, max_iter=2000
    )
    return W, vals


def fit(X, K, kind, mean_mode=MeanMode.ZERO, dense_max_dim=DENSE_EIGEN_MAX_DIM):
    """Fit a K-component PCA model under the chosen kernel.

    `mean_mode` must be concrete (zero, half or sample mean); the
    best-of-three selection needs ground truth and lives in
    :func:`fit_best_mean`.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a D x N data matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix must be finite")
    D, N = X.shape
    if not 1 <= K <= min(D, N):
        raise ValueError("K must satisfy 1 <= K <= min(D, N) = %d" % min(D, N))
    kind = KernelKind(kind)
    mean = resolve_mean(X, mean_mode)
    Xc = X - mean[:, None]
    if kind is KernelKind.L2:
        W, vals = _fit_l2(Xc, K)
    else:
        W, vals = _fit_mf(Xc, K, kind, dense_max_dim)
    return PcaModel(W=W, mean=mean, kind=kind, eigenvalues=np.asarray(vals, dtype=float))


def reconstruct(model, v):
    """Project onto the principal subspace: W W^T (v - mean) + mean.

    No clamping is applied here; image-range clipping is an imaging
    concern.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != model.mean.shape:
        raise ValueError(
            "dimension mismatch: vector %s vs model %s" % (v.shape, model.mean.shape)
        )
    centered = v - model.mean
    return model.W @ (model.W.T @ centered) + model.mean


def _vector_psnr(a, b):
    err = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    m = float(np.mean(err * err))
    if m == 0.0:
        return np.inf
    return 10.0 * np.log10(1.0 / m)


def fit_best_mean(X, K, kind, reference, index=0, dense_max_dim=DENSE_EIGEN_MAX_DIM):
    """Fit under each concrete mean mode and keep whichever reconstructs
    the chosen column closest to the clean reference (largest PSNR).

    `index` selects the corrupted column to reconstruct; pass None to
    also search over columns.  Returns
    (model, mean_mode, index, reconstruction, psnr_db).
    """
    X = np.asarray(X, dtype=float)
    reference = np.asarray(reference, dtype=float)
    indices = range(X.shape[1]) if index is None else [int(index)]
    best = None
    for mode in _CONCRETE_MODES:
        model = fit(X, K, kind, mode, dense_max_dim=dense_max_dim)
        for i in indices:
            rec = reconstruct(model, X[:, i])
            p = _vector_psnr(rec, reference)
            # >= so later candidates win ties (sample mean preferred)
            if best is None or p >= best[4]:
                best = (model, mode, i, rec, p)
    return best
