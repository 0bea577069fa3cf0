"""
Multiplication-free l1-norm kernels, the generalized covariance matrices
they induce, and robust PCA for image denoising.
"""

from .kernels import (
    KernelKind,
    euclid_dot,
    mf_dot,
    mf_matrix_product,
    min_dot_matched,
    min_dot_signed,
    sign,
)
from .covariance import (
    hadamard,
    is_psd,
    l2_covariance,
    mf_covariance,
    min_kernel_matrix,
    multiplication_count,
)
from .eigen import EigenDecomposition, jacobi_eigen, subspace_iteration, top_k
from .pca import MeanMode, PcaModel, fit, fit_best_mean, reconstruct
from .imaging import NoiseSpec, mat, mse, psnr, salt_pepper, occlude_tiles, vec

__version__ = "0.1.0"

__all__ = [
    "KernelKind",
    "sign",
    "mf_dot",
    "min_dot_signed",
    "min_dot_matched",
    "euclid_dot",
    "mf_matrix_product",
    "l2_covariance",
    "mf_covariance",
    "is_psd",
    "min_kernel_matrix",
    "hadamard",
    "multiplication_count",
    "EigenDecomposition",
    "jacobi_eigen",
    "top_k",
    "subspace_iteration",
    "MeanMode",
    "PcaModel",
    "fit",
    "reconstruct",
    "fit_best_mean",
    "NoiseSpec",
    "vec",
    "mat",
    "occlude_tiles",
    "salt_pepper",
    "mse",
    "psnr",
]
