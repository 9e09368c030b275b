"""Linear 2D wave equation as a Hamiltonian benchmark.

The PDE ``u_tt = mu^2 (u_xx + u_yy)`` on a rectangle with homogeneous
Dirichlet data is discretized on the interior grid points with three-point
central differences.  With ``q = u`` and ``p = u_t`` the semi-discrete system
is ``x' = J H x`` with

    H = [[mu^2 K, 0],
         [0,      I]],   K = kron(T1, I) + kron(I, T2),

where ``T = tridiag(-1, 2, -1) / dx^2``.  Unknowns are ordered with the
first coordinate varying slowest.  Time integration uses the implicit
midpoint rule, which conserves the quadratic Hamiltonian ``x^T H x / 2``.
"""
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError
from .symplectic import OrthoSymplecticBasis, SnapshotMatrix, symplectic_inverse


@dataclass(frozen=True)
class WaveModelConfig:
    """Grid, physics and time-stepping parameters.

    ``n_xi1`` and ``n_xi2`` count interior unknowns per direction unless
    ``counts_include_boundary`` is set, in which case the two boundary nodes
    of each direction are included in the count.

    The initial displacement is a cubic-spline bump in ``xi2`` centred at
    ``u0_sup / 2 - bump_center_offset / 2``.  With the defaults (offset 3)
    that centre lies at ``-0.5``, just outside the domain, so only the
    trailing flank of the bump is resolved; ``bump_center_offset=-1`` puts
    the centre at ``1.5``, the middle of the default ``xi2`` extent.
    """

    n_xi1: int = 10
    n_xi2: int = 60
    L1: float = 0.5
    L2: float = 3.0
    c: float = 1.0
    u0_sup: float = 2.0
    bump_center_offset: float = 3.0
    nt: int = 150
    counts_include_boundary: bool = False

    def __post_init__(self):
        if self.n_xi1 < 3 or self.n_xi2 < 3:
            raise ValueError(f"grid counts must be >= 3, got {self.n_xi1}x{self.n_xi2}")
        if not (self.c > 0 and self.u0_sup > 0 and self.L1 > 0 and self.L2 > 0):
            raise ValueError("c, u0_sup and the domain extents must be positive")
        if self.nt < 1:
            raise ValueError(f"nt must be >= 1, got {self.nt}")

    @classmethod
    def desk(cls, **kw):
        """Small profile: 10 x 60 interior unknowns (2N = 1200), 150 steps."""
        return cls(**{"n_xi1": 10, "n_xi2": 60, "nt": 150, **kw})

    @classmethod
    def full(cls, **kw):
        """Large profile: 50 x 300 grid points including the boundary, 1500 steps."""
        return cls(**{"n_xi1": 50, "n_xi2": 300, "nt": 1500,
                      "counts_include_boundary": True, **kw})

    @property
    def interior(self):
        drop = 2 if self.counts_include_boundary else 0
        return self.n_xi1 - drop, self.n_xi2 - drop

    @property
    def spacing(self):
        m1, m2 = self.interior
        return self.L1 / (m1 + 1), self.L2 / (m2 + 1)

    @property
    def N(self):
        m1, m2 = self.interior
        return m1 * m2

    @property
    def t_end(self):
        return 2.0 / self.c

    def grid(self):
        """Interior coordinates ``(xi1, xi2)``, each of length ``N``."""
        (m1, m2), (d1, d2) = self.interior, self.spacing
        x1 = d1 * np.arange(1, m1 + 1)
        x2 = d2 * np.arange(1, m2 + 1)
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")
        return X1.ravel(), X2.ravel()


@dataclass(frozen=True)
class LinearHamiltonianSystem:
    """``x' = J H x`` with symmetric ``H`` (sparse or dense) of size ``2N``."""

    H: object
    mu: float = 1.0

    @property
    def N(self):
        return self.H.shape[0] // 2

    def hamiltonian(self, X):
        return hamiltonian(self, X)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    hamiltonian_trace: np.ndarray

    def relative_drift(self):
        """``max_n |H(x_n) - H(x_0)| / |H(x_0)|`` (0 for a zero trajectory)."""
        h0 = self.hamiltonian_trace[0]
        dev = np.max(np.abs(self.hamiltonian_trace - h0))
        return float(dev / abs(h0)) if h0 != 0 else float(dev)


def bump_h(s):
    """Compactly supported C1 cubic spline on ``[0, 2]`` with ``h(0) = 1``."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("bump_h is defined for s >= 0")
    out = np.where(s <= 1.0, 1.0 - 1.5 * s**2 + 0.75 * s**3, 0.25 * (2.0 - s) ** 3)
    out = np.where(s > 2.0, 0.0, out)
    return out[()] if out.ndim == 0 else out


def bump_dh(s):
    """Derivative of :func:`bump_h`."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("bump_dh is defined for s >= 0")
    out = np.where(s <= 1.0, -3.0 * s + 2.25 * s**2, -0.75 * (2.0 - s) ** 2)
    out = np.where(s > 2.0, 0.0, out)
    return out[()] if out.ndim == 0 else out


def initial_state(cfg):
    """Bump displacement travelling in ``+xi2`` at speed ``c``; ``[u0; v0]``."""
    _, x2 = cfg.grid()
    arg = x2 + cfg.bump_center_offset / 2.0 - cfg.u0_sup / 2.0
    s = 4.0 * np.abs(arg / cfg.u0_sup)
    u0 = bump_h(s)
    speed = 4.0 * cfg.c / cfg.u0_sup
    v0 = np.where(arg >= 0, -speed, speed) * bump_dh(s)
    return np.concatenate([u0, v0])


def dirichlet_laplacian_1d(m, dx):
    """``tridiag(-1, 2, -1) / dx^2`` of size ``m`` (CSR)."""
    main = np.full(m, 2.0)
    off = np.full(m - 1, -1.0)
    return sp.diags([off, main, off], [-1, 0, 1], format="csr") / dx**2


def stiffness(cfg):
    """``K = D_11 + D_22`` on the interior grid (positive definite)."""
    (m1, m2), (d1, d2) = cfg.interior, cfg.spacing
    T1 = dirichlet_laplacian_1d(m1, d1)
    T2 = dirichlet_laplacian_1d(m2, d2)
    return (sp.kron(T1, sp.identity(m2)) + sp.kron(sp.identity(m1), T2)).tocsr()


def build_system(cfg, mu=None):
    """Assemble ``H(mu) = blkdiag(mu^2 K, I)``; ``mu`` defaults to ``cfg.c``."""
    mu = cfg.c if mu is None else float(mu)
    K = stiffness(cfg)
    H = sp.block_diag([mu**2 * K, sp.identity(K.shape[0])], format="csc")
    return LinearHamiltonianSystem(H=H, mu=mu)


def hamiltonian(sys, X):
    """``x^T H x / 2`` for a state vector or for each column of a matrix."""
    X = np.asarray(X, dtype=np.float64)
    HX = sys.H @ X
    return 0.5 * np.sum(X * HX, axis=0)


def _JH(H):
    n = H.shape[0] // 2
    if sp.issparse(H):
        H = H.tocsr()
        return sp.vstack([H[n:], -H[:n]], format="csc")
    return np.vstack([H[n:], -H[:n]])


def step_operator(sys, dt):
    """Return ``step(x)`` applying one implicit midpoint step of size ``dt``.

    The left-hand matrix ``I - dt/2 J H`` is factored once.
    """
    A = _JH(sys.H)
    n2 = A.shape[0]
    if sp.issparse(A):
        I = sp.identity(n2, format="csc")
        try:
            lu = spla.splu((I - 0.5 * dt * A).tocsc())
        except RuntimeError as exc:
            raise ConvergenceError(f"implicit midpoint system is singular: {exc}") from exc
        rhs = (I + 0.5 * dt * A).tocsr()
        return lambda x: lu.solve(rhs @ x)
    I = np.eye(n2)
    M = I - 0.5 * dt * A
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", la.LinAlgWarning)
        factors = la.lu_factor(M, check_finite=False)
    if np.any(np.diag(factors[0]) == 0):
        raise ConvergenceError("implicit midpoint system is singular")
    rhs = I + 0.5 * dt * A
    return lambda x: la.lu_solve(factors, rhs @ x, check_finite=False)


def implicit_midpoint(sys, x0, t0, t_end, nt):
    """Integrate ``x' = J H x`` over ``[t0, t_end]`` with ``nt`` equal steps."""
    nt = int(nt)
    if nt < 1:
        raise ValueError(f"nt must be >= 1, got {nt}")
    if not t_end > t0:
        raise ValueError(f"need t_end > t0, got [{t0}, {t_end}]")
    x0 = np.asarray(x0, dtype=np.float64).ravel()
    if x0.shape[0] != sys.H.shape[0]:
        raise ValueError(f"x0 has length {x0.shape[0]}, system has dimension {sys.H.shape[0]}")
    dt = (t_end - t0) / nt
    step = step_operator(sys, dt)
    states = np.empty((x0.shape[0], nt + 1))
    states[:, 0] = x0
    for n in range(nt):
        states[:, n + 1] = step(states[:, n])
    times = t0 + dt * np.arange(nt + 1)
    return Trajectory(times=times, states=states, hamiltonian_trace=hamiltonian(sys, states))


def simulate(cfg, mu=None):
    """Full-order trajectory for ``cfg`` at speed ``mu`` (defaults to ``cfg.c``)."""
    if mu is not None:
        cfg = replace(cfg, c=float(mu))
    sys = build_system(cfg)
    return implicit_midpoint(sys, initial_state(cfg), 0.0, cfg.t_end, cfg.nt)


def reduce(sys, V):
    """Galerkin-symplectic reduction ``H_r = V^T H V`` (dense, symmetrized)."""
    Vm = V.assemble() if isinstance(V, OrthoSymplecticBasis) else np.asarray(V)
    if Vm.shape[0] != sys.H.shape[0]:
        raise ValueError(f"basis has {Vm.shape[0]} rows, system has dimension {sys.H.shape[0]}")
    Hr = Vm.T @ np.asarray(sys.H @ Vm)
    return LinearHamiltonianSystem(H=0.5 * (Hr + Hr.T), mu=sys.mu)


def reduce_state(V, x0):
    """Reduced initial value ``V^+ x0``."""
    return symplectic_inverse(V) @ np.asarray(x0, dtype=np.float64)


def mu_values(count=11, start=1.0, step=0.1):
    """Parameter sweep ``mu_j = start + step * j``, ``j = 0..count-1``."""
    return [round(start + step * j, 12) for j in range(int(count))]


def collect_snapshots(cfg, mus, nt=None, include_initial=False):
    """Stack trajectories for every ``mu`` into a ``2N x (len(mus) * nt)`` matrix.

    Each trajectory contributes the states after steps ``1..nt``, or
    ``0..nt-1`` with ``include_initial``.  Columns are ordered by parameter,
    then by time.
    """
    mus = list(mus)
    if not mus:
        raise ValueError("need at least one parameter value")
    if nt is not None:
        cfg = replace(cfg, nt=int(nt))
    blocks = [snapshot_block(cfg, mu, include_initial) for mu in mus]
    return SnapshotMatrix(np.hstack(blocks))


def snapshot_block(cfg, mu, include_initial=False):
    """Snapshot columns contributed by one parameter value."""
    states = simulate(cfg, mu).states
    return states[:, :-1] if include_initial else states[:, 1:]


def flow_map(sys, dt):
    """Dense one-step matrix of the implicit midpoint rule (small systems only)."""
    A = _JH(sys.H)
    A = A.toarray() if sp.issparse(A) else np.asarray(A)
    I = np.eye(A.shape[0])
    return la.solve(I - 0.5 * dt * A, I + 0.5 * dt * A)


def grid_size_summary(cfg):
    """Human-readable dimension bookkeeping for sidecar files."""
    m1, m2 = cfg.interior
    return {"interior_xi1": m1, "interior_xi2": m2, "N": cfg.N, "dim": 2 * cfg.N,
            "dxi1": cfg.spacing[0], "dxi2": cfg.spacing[1]}
