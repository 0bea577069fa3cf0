"""
Multiplication-free vector dot products and their matrix extension.

Three dot products built from sign logic, absolute values, min and
addition only:

  mf_dot            additive variant; induces twice the l1-norm
  min_dot_signed    signed-min variant; induces the l1-norm
  min_dot_matched   matched-min variant (opposite-sign components drop
                    out instead of subtracting); induces the l1-norm

plus the ordinary Euclidean dot product for reference, and
``mf_matrix_product`` which applies any of the four column-by-column,
mirroring W^T X.

The accumulation path of the three MF products contains no general
multiplication: terms are assembled with ``np.where`` on the joint sign,
never by multiplying operands together.
"""

import enum

import numpy as np

__all__ = [
    "KernelKind",
    "sign",
    "mf_dot",
    "min_dot_signed",
    "min_dot_matched",
    "euclid_dot",
    "mf_matrix_product",
]


class KernelKind(enum.Enum):
    """Selector for the dot product used in covariance construction."""

    L2 = "l2"
    MF_ADD = "mf"
    MIN_SIGNED = "min1"
    MIN_MATCHED = "min2"

    @property
    def multiplication_free(self):
        return self is not KernelKind.L2


def sign(a):
    """Standard signum: -1 for a<0, 0 for a=0, +1 for a>0.

    Accepts scalars or arrays; rejects non-finite input.
    """
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("sign: input must be finite")
    out = np.sign(a).astype(int)
    return out.item() if out.ndim == 0 else out


def _check_pair(w, x):
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    if w.ndim != 1 or x.ndim != 1:
        raise ValueError("dot products expect 1-D vectors")
    if w.shape != x.shape:
        raise ValueError(
            "dimension mismatch: %d vs %d" % (w.shape[0], x.shape[0])
        )
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(x))):
        raise ValueError("dot products require finite inputs")
    return w, x


def _joint_sign(w, x):
    # sign(w_i x_i) without forming the product w_i * x_i.
    return np.sign(w) * np.sign(x)


def _sum_left_to_right(terms):
    # strict left-to-right accumulation: deterministic and bit-identical
    # to the covariance module's entry-wise construction (np.sum would
    # reorder via pairwise summation)
    acc = 0.0
    for t in terms:
        acc += t
    return acc


def mf_dot(w, x):
    """Additive MF dot product: sum_i sign(w_i x_i) (|w_i| + |x_i|).

    Satisfies mf_dot(x, x) = 2 * ||x||_1.
    """
    w, x = _check_pair(w, x)
    s = _joint_sign(w, x)
    mag = np.abs(w) + np.abs(x)
    terms = np.where(s > 0, mag, np.where(s < 0, -mag, 0.0))
    return _sum_left_to_right(terms)


def min_dot_signed(w, x):
    """Signed-min dot product: sum_i sign(w_i x_i) min(|w_i|, |x_i|).

    Satisfies min_dot_signed(x, x) = ||x||_1.  Opposite-sign component
    pairs contribute a subtractive term.
    """
    w, x = _check_pair(w, x)
    s = _joint_sign(w, x)
    mag = np.minimum(np.abs(w), np.abs(x))
    terms = np.where(s > 0, mag, np.where(s < 0, -mag, 0.0))
    return _sum_left_to_right(terms)


def min_dot_matched(w, x):
    """Matched-min dot product: opposite-sign components contribute zero.

    sum_i [sign(w_i) = sign(x_i)] min(|w_i|, |x_i|); induces ||x||_1.
    """
    w, x = _check_pair(w, x)
    matched = np.sign(w) == np.sign(x)
    mag = np.minimum(np.abs(w), np.abs(x))
    terms = np.where(matched, mag, 0.0)
    return _sum_left_to_right(terms)


def euclid_dot(w, x):
    """Ordinary Euclidean inner product sum_i w_i x_i."""
    w, x = _check_pair(w, x)
    return float(np.dot(w, x))


_DOT = {
    KernelKind.L2: euclid_dot,
    KernelKind.MF_ADD: mf_dot,
    KernelKind.MIN_SIGNED: min_dot_signed,
    KernelKind.MIN_MATCHED: min_dot_matched,
}


def dot(w, x, kind):
    """Dispatch to the dot product selected by `kind`."""
    return _DOT[KernelKind(kind)](w, x)


def mf_matrix_product(W, X, kind):
    """Generalized matrix product: entry (i, j) is the `kind` dot product
    of column i of W with column j of X.  With kind=L2 this is W^T X.
    """
    W = np.asarray(W, dtype=float)
    X = np.asarray(X, dtype=float)
    if W.ndim != 2 or X.ndim != 2:
        raise ValueError("mf_matrix_product expects 2-D matrices")
    if W.shape[0] != X.shape[0]:
        raise ValueError(
            "dimension mismatch: %d rows vs %d rows" % (W.shape[0], X.shape[0])
        )
    f = _DOT[KernelKind(kind)]
    m, p = W.shape[1], X.shape[1]
    out = np.empty((m, p))
    for i in range(m):
        for j in range(p):
            out[i, j] = f(W[:, i], X[:, j])
    return out
