"""Ortho-symplectic basis generation from snapshot data.

Conventions
-----------
A snapshot matrix ``Xs`` has ``2N`` rows, positions ``Q = Xs[:N]`` on top
and momenta ``P = Xs[N:]`` below.  A basis with ``k`` pairs is stored by its
two ``N x k`` blocks and assembles to the ``2N x 2k`` matrix

    V = [[VQ, -VP],
         [VP,  VQ]]

The canonical Poisson matrix ``J = [[0, I], [-I, 0]]`` is never formed;
:func:`apply_J` and :func:`apply_JT` shuffle and negate halves instead.
"""
from dataclasses import dataclass

import numpy as np

from .errors import GapError, RankError, StructureError
from .numerics import as_matrix, numerical_rank, svd, truncated_svd
from .sketching import dense_sketch, draw_sketch, power_sketch

GAP_RTOL = 1e-8
RANK_RTOL = 1e-14


def apply_J(X):
    """``J_{2N} @ X``: ``[q; p] -> [p; -q]``."""
    X = np.asarray(X)
    n = _half(X.shape[0])
    return np.concatenate([X[n:], -X[:n]], axis=0)


def apply_JT(X):
    """``J_{2N}^T @ X``: ``[q; p] -> [-p; q]``."""
    X = np.asarray(X)
    n = _half(X.shape[0])
    return np.concatenate([-X[n:], X[:n]], axis=0)


def poisson_matrix(n):
    """Dense ``J_{2n}``, for tests and small diagnostics only."""
    Z, I = np.zeros((n, n)), np.eye(n)
    return np.block([[Z, I], [-I, Z]])


def _half(rows):
    if rows % 2:
        raise ValueError(f"row count must be even, got {rows}")
    return rows // 2


@dataclass(frozen=True)
class SnapshotMatrix:
    """Real ``2N x n_s`` snapshot matrix."""

    data: np.ndarray

    def __post_init__(self):
        data = as_matrix(self.data, "snapshot matrix")
        if np.iscomplexobj(data):
            raise ValueError("snapshot matrix must be real")
        _half(data.shape[0])
        object.__setattr__(self, "data", data)

    @property
    def N(self):
        return self.data.shape[0] // 2

    @property
    def n_s(self):
        return self.data.shape[1]

    @property
    def Q(self):
        return self.data[: self.N]

    @property
    def P(self):
        return self.data[self.N :]


def _snapshot_array(Xs):
    if isinstance(Xs, SnapshotMatrix):
        return Xs.data
    return SnapshotMatrix(Xs).data


@dataclass(frozen=True)
class OrthoSymplecticBasis:
    """Ortho-symplectic basis given by its blocks ``VQ`` and ``VP`` (``N x k``)."""

    VQ: np.ndarray
    VP: np.ndarray

    def __post_init__(self):
        VQ = np.asarray(self.VQ, dtype=np.float64)
        VP = np.asarray(self.VP, dtype=np.float64)
        if VQ.ndim != 2 or VQ.shape != VP.shape:
            raise ValueError(f"VQ and VP must be equal-shape 2-D arrays, got {VQ.shape}, {VP.shape}")
        object.__setattr__(self, "VQ", VQ)
        object.__setattr__(self, "VP", VP)

    @property
    def N(self):
        return self.VQ.shape[0]

    @property
    def k(self):
        return self.VQ.shape[1]

    def assemble(self):
        """The ``2N x 2k`` real basis matrix."""
        return np.block([[self.VQ, -self.VP], [self.VP, self.VQ]])

    def complex(self):
        """``U_c = VQ + i VP``, the complex Stiefel representative."""
        return self.VQ + 1j * self.VP

    def project(self, X):
        """``V V^T X`` for a real ``2N x m`` matrix."""
        V = self.assemble()
        return V @ (V.T @ X)

    @classmethod
    def from_stacked(cls, E):
        """Inverse of :meth:`stacked`."""
        E = np.asarray(E)
        n = _half(E.shape[0])
        return cls(E[:n], E[n:])

    def stacked(self):
        """First block column ``[VQ; VP]`` (``2N x k``), the on-disk layout."""
        return np.vstack([self.VQ, self.VP])


def complexify(Xs):
    """``X_c = Q + i P`` (``N x n_s``)."""
    X = _snapshot_array(Xs)
    n = X.shape[0] // 2
    return X[:n] + 1j * X[n:]


def map_A(Uc, tol=1e-8):
    """Map a complex matrix with orthonormal columns to an ortho-symplectic basis."""
    Uc = as_matrix(Uc, "Uc")
    k = Uc.shape[1]
    defect = np.linalg.norm(Uc.conj().T @ Uc - np.eye(k))
    if defect > tol * max(1.0, np.sqrt(k)):
        raise StructureError(f"columns of Uc are not orthonormal (defect {defect:.3e})")
    return OrthoSymplecticBasis(np.real(Uc).copy(), np.imag(Uc).copy())


def symplectic_inverse(V):
    """``V^+ = J_{2k} V^T J_{2N}^T`` (``2k x 2N``)."""
    Vm = V.assemble() if isinstance(V, OrthoSymplecticBasis) else np.asarray(V)
    # J_2k (V^T J_2N^T) = J_2k (J_2N V)^T
    return apply_J(apply_J(Vm).T)


def check_structure(V, tol):
    """Orthonormality and symplecticity defects of the assembled basis.

    Both are Frobenius norms, of ``V^T V - I`` and ``V^T J V - J``.
    """
    Vm = V.assemble() if isinstance(V, OrthoSymplecticBasis) else np.asarray(V)
    k2 = Vm.shape[1]
    ortho = float(np.linalg.norm(Vm.T @ Vm - np.eye(k2)))
    sympl = float(np.linalg.norm(Vm.T @ apply_J(Vm) - poisson_matrix(k2 // 2)))
    return {
        "orthonormality_defect": ortho,
        "symplecticity_defect": sympl,
        "pass": bool(ortho <= tol and sympl <= tol),
    }


def csvd(Xs, k):
    """Complex SVD basis: the optimal ortho-symplectic basis with ``k`` pairs."""
    Xc = complexify(Xs)
    k = int(k)
    if not 1 <= k <= min(Xc.shape):
        raise ValueError(f"k={k} out of range [1, {min(Xc.shape)}]")
    f = svd(Xc)
    if f.sigma[k - 1] <= RANK_RTOL * f.sigma[0]:
        raise RankError(
            f"complex snapshot matrix has numerical rank < {k} "
            f"(sigma_k={f.sigma[k - 1]:.3e}, sigma_1={f.sigma[0]:.3e})"
        )
    return map_A(f.U[:, :k])


def _check_sizes(Xc, cfg):
    N, n_s = Xc.shape
    if cfg.k > N:
        raise ValueError(f"k={cfg.k} exceeds half dimension N={N}")
    if cfg.l > n_s:
        raise ValueError(f"l=k+p_ovs={cfg.l} exceeds snapshot count n_s={n_s}")


def rcsvd(Xs, cfg, omega=None):
    """Randomized complex SVD basis.

    Steps: sketch ``Y = Xc (Xc^H Xc)^q Omega``, orthonormal basis ``U_Y`` of
    ``range(Y)``, ``B = U_Y^H Xc``, SVD of ``B``, keep ``U_Y U_B[:, :k]``.

    Parameters
    ----------
    Xs
        Real snapshot matrix (array or :class:`SnapshotMatrix`).
    cfg
        :class:`~randsymp.sketching.SketchConfig`.
    omega
        Optional sketch to use instead of the one drawn from ``cfg.seed``.
    """
    Xc = complexify(Xs)
    _check_sizes(Xc, cfg)
    if omega is None:
        omega = draw_sketch(cfg, Xc.shape[1])
    Y = power_sketch(Xc, omega, cfg.q_pow, cfg.stabilize)
    fy = svd(Y)
    r = numerical_rank(fy.sigma, Y.shape)
    if r < cfg.k:
        raise RankError(f"sketch Y has numerical rank {r} < k={cfg.k}")
    UY = fy.U[:, :r]
    B = UY.conj().T @ Xc
    fb = svd(B)
    if fb.sigma[cfg.k - 1] <= RANK_RTOL * fb.sigma[0]:
        raise RankError(f"projected matrix B has numerical rank < k={cfg.k}")
    return map_A(UY @ fb.U[:, : cfg.k])


def pod(M, r):
    """First ``r`` left singular vectors of the real matrix ``M``."""
    return truncated_svd(M, r).U


def extended_snapshots(Xs):
    """``Y_s = [Xs, J^T Xs] = [[Q, -P], [P, Q]]``, the real image of ``X_c``."""
    X = _snapshot_array(Xs)
    return np.hstack([X, apply_JT(X)])


def block_sketch(Omega):
    """Real ``2 n_s x 2 l`` block sketch ``[[Re, -Im], [Im, Re]]`` of a complex ``Omega``."""
    Om = dense_sketch(Omega)
    top = np.vstack([Om.real, Om.imag])
    return np.hstack([top, apply_JT(top)])


def sketched_extended(Xs, Omega, q_pow, stabilize=False):
    """``Z = Y_s (Y_s^T Y_s)^q Omega_tilde`` in real arithmetic."""
    Ys = extended_snapshots(Xs)
    Z = Ys @ block_sketch(Omega)
    for _ in range(int(q_pow)):
        W = Ys.T @ Z
        if stabilize:
            W = np.linalg.qr(W)[0]
        Z = Ys @ W
        if stabilize and Z.shape[0] >= Z.shape[1]:
            Z = np.linalg.qr(Z)[0]
    return Z


def _symplectic_gram_schmidt(W, k):
    """Extract ``E`` (``2N x k``) with ``[E, J^T E]`` orthonormal spanning ``range(W)``.

    ``range(W)`` must be invariant under ``J``.  Column pivoting picks the
    largest residual at every step; the pivot is re-orthogonalized against
    all previous pairs before normalization.
    """
    E = np.zeros((W.shape[0], 0))
    R = W.copy()
    for _ in range(k):
        if E.shape[1]:
            F = np.hstack([E[:, -1:], apply_JT(E[:, -1:])])
            R = R - F @ (F.T @ R)
        j = int(np.argmax(np.linalg.norm(R, axis=0)))
        e = R[:, j]
        if E.shape[1]:
            F = np.hstack([E, apply_JT(E)])
            e = e - F @ (F.T @ e)
        norm = np.linalg.norm(e)
        if norm == 0.0:
            raise RankError("basis span collapsed during symplectic orthonormalization")
        E = np.hstack([E, (e / norm)[:, None]])
    return E


def rcsvd_real(Xs, cfg, omega=None):
    """Randomized complex SVD evaluated with real matrices only.

    Works on ``Y_s = [Xs, J^T Xs]`` and the block sketch ``Omega_tilde``:
    ``Z = Y_s (Y_s^T Y_s)^q Omega_tilde`` spans the real image of
    ``range(Y)``; its POD basis ``W`` replaces ``U_Y``, the POD of
    ``W^T Y_s`` truncated to ``2k`` replaces the small complex SVD, and a
    symplectic Gram-Schmidt pass restores the ``[E, J^T E]`` layout.

    Raises
    ------
    GapError
        If the singular values of ``W^T Y_s`` do not separate at index ``2k``
        (relative gap below ``1e-8``); the truncated subspace is then not
        ``J``-invariant and no ortho-symplectic basis is defined.
    """
    X = _snapshot_array(Xs)
    N, n_s = X.shape[0] // 2, X.shape[1]
    if cfg.k > N:
        raise ValueError(f"k={cfg.k} exceeds half dimension N={N}")
    if cfg.l > n_s:
        raise ValueError(f"l=k+p_ovs={cfg.l} exceeds snapshot count n_s={n_s}")
    if omega is None:
        omega = draw_sketch(cfg, n_s)
    Z = sketched_extended(X, omega, cfg.q_pow, cfg.stabilize)
    fz = svd(Z)
    r = numerical_rank(fz.sigma, Z.shape)
    if r < 2 * cfg.k:
        raise RankError(f"sketched extended matrix has numerical rank {r} < 2k={2 * cfg.k}")
    W = fz.U[:, :r]
    Bt = W.T @ extended_snapshots(X)
    fb = svd(Bt)
    k2 = 2 * cfg.k
    sig = fb.sigma
    if sig[k2 - 1] <= RANK_RTOL * sig[0]:
        raise RankError(f"projected extended matrix has numerical rank < 2k={k2}")
    if len(sig) > k2:
        gap = (sig[k2 - 1] - sig[k2]) / sig[k2 - 1]
        if gap < GAP_RTOL:
            raise GapError(
                f"no singular value gap at 2k={k2}: sigma_2k={sig[k2 - 1]:.6e}, "
                f"sigma_2k+1={sig[k2]:.6e} (relative gap {gap:.2e} < {GAP_RTOL:.0e})"
            )
    Wk = W @ fb.U[:, :k2]
    E = _symplectic_gram_schmidt(Wk, cfg.k)
    return OrthoSymplecticBasis(E[:N].copy(), E[N:].copy())


METHODS = ("csvd", "rcsvd", "rcsvd-real")


def build_basis(Xs, method, cfg=None, k=None, omega=None):
    """Dispatch on ``method``; ``k`` is taken from ``cfg`` when omitted."""
    if method == "csvd":
        return csvd(Xs, k if k is not None else cfg.k)
    if cfg is None:
        raise ValueError(f"method {method!r} needs a SketchConfig")
    if method == "rcsvd":
        return rcsvd(Xs, cfg, omega)
    if method == "rcsvd-real":
        return rcsvd_real(Xs, cfg, omega)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
