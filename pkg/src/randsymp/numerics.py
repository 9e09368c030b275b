"""Dense linear-algebra kernels used by every other module.

The heavy lifting is delegated to LAPACK through SciPy; this module pins
down the conventions the rest of the package relies on:

* economy-size factors only,
* singular values in non-increasing order,
* a deterministic phase for singular vectors (largest-magnitude entry of each
  left singular vector is real and positive),
* QR factors with a real, non-negative diagonal in ``R``.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import ConvergenceError


@dataclass(frozen=True)
class SvdFactors:
    """Economy SVD ``A = U @ diag(sigma) @ V.conj().T``."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def rank(self):
        return len(self.sigma)

    def reconstruct(self):
        return (self.U * self.sigma) @ self.V.conj().T


def as_matrix(A, name="A"):
    """Validate ``A`` as a finite, non-empty 2-D array and return it."""
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {A.shape}")
    if A.size == 0:
        raise ValueError(f"{name} must be non-empty, got shape {A.shape}")
    if not np.issubdtype(A.dtype, np.number) or np.issubdtype(A.dtype, np.integer):
        A = A.astype(np.float64)
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf")
    return A


def _fix_phase(U, V):
    # largest-magnitude entry of each U column -> real positive
    idx = np.argmax(np.abs(U), axis=0)
    pivot = U[idx, np.arange(U.shape[1])]
    mag = np.abs(pivot)
    phase = np.where(mag > 0, pivot / np.where(mag > 0, mag, 1), 1)
    corr = np.conj(phase)
    return U * corr, V * corr


def svd(A):
    """Economy SVD with the package-wide phase convention.

    Raises
    ------
    ConvergenceError
        If both the divide-and-conquer and the QR-iteration LAPACK drivers
        fail to converge.
    """
    A = as_matrix(A)
    errors = []
    for driver in ("gesdd", "gesvd"):
        try:
            U, s, Vh = la.svd(A, full_matrices=False, lapack_driver=driver, check_finite=False)
            break
        except la.LinAlgError as exc:
            errors.append(f"{driver}: {exc}")
    else:
        raise ConvergenceError(
            f"SVD of {A.shape[0]}x{A.shape[1]} matrix did not converge ({'; '.join(errors)})"
        )
    U, V = _fix_phase(U, Vh.conj().T)
    return SvdFactors(U=U, sigma=s, V=V)


def singular_values(A):
    """Singular values of ``A`` in non-increasing order."""
    A = as_matrix(A)
    try:
        return la.svd(A, compute_uv=False, check_finite=False)
    except la.LinAlgError:
        return la.svd(A, compute_uv=False, lapack_driver="gesvd", check_finite=False)


def truncated_svd(A, r):
    """First ``r`` singular triplets of ``A`` (best rank-``r`` approximation)."""
    A = as_matrix(A)
    r = int(r)
    if not 1 <= r <= min(A.shape):
        raise ValueError(f"rank r={r} out of range [1, {min(A.shape)}]")
    f = svd(A)
    return SvdFactors(U=f.U[:, :r], sigma=f.sigma[:r], V=f.V[:, :r])


def unitary_dft_rows(A):
    """Right-multiply every row of ``A`` by the unitary ``n x n`` DFT matrix.

    ``F[a, b] = exp(-2j*pi*a*b/n) / sqrt(n)``.  Any ``n`` is supported; the
    FFT backend switches to Bluestein's algorithm for awkward lengths.
    """
    A = as_matrix(A)
    return np.fft.fft(A, axis=1, norm="ortho")


def unitary_idft_rows(A):
    """Inverse of :func:`unitary_dft_rows`."""
    A = as_matrix(A)
    return np.fft.ifft(A, axis=1, norm="ortho")


def norms(A):
    """Frobenius and spectral norm of ``A``."""
    A = as_matrix(A)
    return {
        "frobenius": float(np.linalg.norm(A, "fro")),
        "spectral": float(singular_values(A)[0]),
    }


def qr(A):
    """Economy QR with ``R`` having a real non-negative diagonal.

    Requires ``rows >= cols``.  Rank-deficient input is allowed.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m < n:
        raise ValueError(f"qr needs rows >= cols, got {A.shape}")
    Q, R = la.qr(A, mode="economic", check_finite=False)
    d = np.diag(R)
    mag = np.abs(d)
    phase = np.where(mag > 0, d / np.where(mag > 0, mag, 1), 1)
    Q = Q * phase
    R = np.conj(phase)[:, None] * R
    return {"Q": Q, "R": R}


def orth_columns(A):
    """Orthonormal basis of ``range(A)`` (Q factor, no rank truncation)."""
    return qr(A)["Q"]


def numerical_rank(sigma, shape, rtol=None):
    """Count singular values above ``rtol * sigma[0]``.

    The default tolerance is ``max(shape) * eps``, the usual LAPACK choice.
    """
    sigma = np.asarray(sigma)
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    if rtol is None:
        rtol = max(shape) * np.finfo(np.float64).eps
    return int(np.count_nonzero(sigma > rtol * sigma[0]))
