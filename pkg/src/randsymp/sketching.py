"""Random sketching matrices and power-iteration range sketches.

Two sketch families are provided:

* :class:`SrftSketch`, the subsampled randomized Fourier transform
  ``Omega = sqrt(n/l) * D @ F @ R`` with random unit-modulus phases ``D``, the
  unitary DFT ``F`` and a random column selector ``R``.  It is never formed
  explicitly when applied; ``A @ Omega`` costs one length-``n`` FFT per row.
* :func:`gaussian_sketch`, a dense complex standard normal matrix.

:func:`power_sketch` evaluates ``Y = Xc (Xc^H Xc)^q Omega`` for either kind.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import as_matrix, orth_columns, unitary_dft_rows
from .rng import stream


@dataclass(frozen=True)
class SrftSketch:
    """An ``n x l`` SRFT sketching matrix in factored form."""

    n: int
    l: int
    phases: np.ndarray = field(repr=False)
    selection: np.ndarray
    seed: int

    @property
    def scale(self):
        return math.sqrt(self.n / self.l)

    @property
    def shape(self):
        return (self.n, self.l)

    def apply(self, A):
        return srft_apply(A, self)

    def dense(self):
        """Materialize ``Omega`` (``n x l``) column by column.

        Only the ``l`` selected DFT columns are generated, with the exponent
        reduced modulo ``n`` in integer arithmetic.
        """
        a = np.arange(self.n, dtype=np.int64)[:, None]
        b = self.selection.astype(np.int64)[None, :]
        F_sel = np.exp(-2j * np.pi * ((a * b) % self.n) / self.n) / math.sqrt(self.n)
        return self.scale * self.phases[:, None] * F_sel


@dataclass(frozen=True)
class SketchConfig:
    """Hyperparameters of one randomized basis computation.

    ``k`` is the number of symplectic pairs (the basis has ``2k`` columns),
    ``l = k + p_ovs`` is the sketch width and ``s`` the block split used by
    the advanced error bounds.
    """

    k: int
    p_ovs: int = 0
    q_pow: int = 0
    kind: str = "srft"
    stabilize: bool = False
    seed: int = 0
    s: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.p_ovs < 0 or self.q_pow < 0:
            raise ValueError("p_ovs and q_pow must be non-negative")
        if self.kind not in ("srft", "gaussian"):
            raise ValueError(f"unknown sketch kind {self.kind!r}")
        if not 0 <= self.s <= self.p_ovs:
            raise ValueError(f"s must satisfy 0 <= s <= l - k = {self.p_ovs}, got {self.s}")

    @property
    def l(self):
        return self.k + self.p_ovs


def srft_new(n, l, seed):
    """Draw an SRFT sketch of size ``n x l`` from ``seed``.

    Phases are ``exp(2*pi*i*u)`` with ``u`` uniform on ``[0, 1)`` (53-bit
    doubles).  The selection is the first ``l`` entries of a partial
    Fisher-Yates shuffle of ``0..n-1``.
    """
    n, l = int(n), int(l)
    if not 1 <= l <= n:
        raise ValueError(f"SRFT needs 1 <= l <= n, got n={n}, l={l}")
    rng = stream(seed, "srft")
    u = rng.random(n)
    phases = np.exp(2j * np.pi * u)
    perm = np.arange(n, dtype=np.int64)
    swap = rng.integers(np.arange(l), n)  # swap[i] uniform on [i, n)
    for i in range(l):
        j = swap[i]
        perm[i], perm[j] = perm[j], perm[i]
    return SrftSketch(n=n, l=l, phases=phases, selection=perm[:l].copy(), seed=int(seed))


def srft_apply(A, sk):
    """Return ``A @ Omega`` for an SRFT ``Omega`` without forming it."""
    A = as_matrix(A)
    if A.shape[1] != sk.n:
        raise ValueError(f"A has {A.shape[1]} columns, sketch expects {sk.n}")
    AD = A * sk.phases[None, :]
    return sk.scale * unitary_dft_rows(AD)[:, sk.selection]


def gaussian_sketch(n, l, seed):
    """Complex standard normal ``n x l`` matrix (real/imag variance 1/2 each)."""
    n, l = int(n), int(l)
    if n < 1 or l < 1:
        raise ValueError(f"gaussian sketch needs n, l >= 1, got n={n}, l={l}")
    rng = stream(seed, "gaussian")
    G = rng.standard_normal((n, l, 2)) / math.sqrt(2.0)
    return G[..., 0] + 1j * G[..., 1]


def draw_sketch(cfg, n):
    """Sketch prescribed by ``cfg`` for a matrix with ``n`` columns."""
    if cfg.l > n:
        raise ValueError(f"sketch width l={cfg.l} exceeds column count {n}")
    if cfg.kind == "srft":
        return srft_new(n, cfg.l, cfg.seed)
    return gaussian_sketch(n, cfg.l, cfg.seed)


def sketch_width(Omega):
    return Omega.l if isinstance(Omega, SrftSketch) else np.shape(Omega)[1]


def dense_sketch(Omega):
    return Omega.dense() if isinstance(Omega, SrftSketch) else np.asarray(Omega)


def apply_sketch(A, Omega):
    if isinstance(Omega, SrftSketch):
        return srft_apply(A, Omega)
    A = as_matrix(A)
    Omega = np.asarray(Omega)
    if A.shape[1] != Omega.shape[0]:
        raise ValueError(f"A has {A.shape[1]} columns, sketch has {Omega.shape[0]} rows")
    return A @ Omega


def power_sketch(Xc, Omega, q_pow, stabilize=False):
    """Range sketch ``Y = Xc (Xc^H Xc)^q Omega``.

    With ``stabilize`` the iterate is replaced by its orthonormal QR factor
    after every product with ``Xc^H`` and ``Xc``; the returned matrix then
    has orthonormal columns spanning the same space as the plain sketch.
    """
    Xc = as_matrix(Xc, "Xc")
    l = sketch_width(Omega)
    if l > Xc.shape[1]:
        raise ValueError(f"sketch width {l} exceeds column count {Xc.shape[1]}")
    q_pow = int(q_pow)
    if q_pow < 0:
        raise ValueError("q_pow must be non-negative")
    Y = apply_sketch(Xc, Omega)
    if stabilize and Y.shape[0] >= Y.shape[1]:
        Y = orth_columns(Y)
    for _ in range(q_pow):
        W = Xc.conj().T @ Y
        if stabilize:
            W = orth_columns(W)
        Y = Xc @ W
        if stabilize and Y.shape[0] >= Y.shape[1]:
            Y = orth_columns(Y)
    return Y


def srft_threshold(k, n):
    """Smallest integer ``l`` with ``4 (sqrt(k) + sqrt(8 ln(k n)))^2 ln(k) <= l``.

    Natural logarithms.  The caller must still check ``l <= n``.
    """
    k, n = int(k), int(n)
    if k < 2:
        raise ValueError(f"threshold needs k >= 2 (ln k > 0), got k={k}")
    if n < k:
        raise ValueError(f"threshold needs n >= k, got n={n}, k={k}")
    value = 4.0 * (math.sqrt(k) + math.sqrt(8.0 * math.log(k * n))) ** 2 * math.log(k)
    return int(math.ceil(value))
