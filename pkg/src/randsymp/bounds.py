"""Projection errors, a-priori error bounds and their effectivities.

All bounds are for the unsquared Frobenius projection error
``||Xs - V V^T Xs||_F``.  Singular values are those of the complex snapshot
matrix ``X_c``; indices in the docstrings are 1-based as in the usual
notation ``sigma_1 >= sigma_2 >= ...``, and any ``sigma_j`` beyond the end
of the stored spectrum is zero.

Bound families
--------------
``eta_det``
    ``(1 + sqrt(1 + ||O2||^2 ||O1^+||^2)) * tail`` with the ``k``-row split.
``eta_det_adv``
    ``sqrt(tail^2 + alpha^2 ||O2||^2 ||O1^+||^2)`` with the ``(l - s)``-row
    split; ``sharp=True`` adds the ``1 + gamma^2 ||O2||^2 ||O1^+||^2``
    denominator.
``eta_prob``
    ``(1 + sqrt(1 + 6 n_s / l)) * tail``.
``eta_prob_adv``
    ``sqrt(tail^2 + alpha^2 * 6 n_s / l)`` with ``s = 0``.
"""
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import AssumptionViolation
from .numerics import singular_values, svd
from .sketching import dense_sketch, sketch_width
from .symplectic import OrthoSymplecticBasis, complexify

CANCELLATION_RTOL = 1e-4
_RESIDUAL_BLOCK = 2048
FULL_ROW_RANK_RTOL = 1e-12


@dataclass(frozen=True)
class SingularSpectrum:
    """Non-increasing, non-negative singular values with a provenance label."""

    values: np.ndarray
    source: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("singular values must be non-negative and non-increasing")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    def at(self, j):
        """``sigma_j`` (1-based); zero past the end."""
        return float(self.values[j - 1]) if 1 <= j <= len(self.values) else 0.0


def _spectrum(sigma):
    return sigma if isinstance(sigma, SingularSpectrum) else SingularSpectrum(sigma)


def snapshot_spectrum(Xs):
    return SingularSpectrum(singular_values(complexify(Xs)), source="X_c")


def projection_error(Xs, V):
    """``||Xs - V V^T Xs||_F`` and its square.

    Uses ``||Xs||^2 - ||V^T Xs||^2`` while that difference is at least
    ``1e-4 ||Xs||^2``, where cancellation costs at most about four digits.
    Below that the explicit residual is formed, one block of columns at a
    time.
    """
    X = np.asarray(getattr(Xs, "data", Xs), dtype=np.float64)
    Vm = V.assemble() if isinstance(V, OrthoSymplecticBasis) else np.asarray(V)
    if Vm.shape[0] != X.shape[0]:
        raise ValueError(f"basis has {Vm.shape[0]} rows, snapshots have {X.shape[0]}")
    coeff = Vm.T @ X
    total = float(np.vdot(X, X).real)
    squared = total - float(np.vdot(coeff, coeff).real)
    if squared < CANCELLATION_RTOL * total:
        squared = 0.0
        for j in range(0, X.shape[1], _RESIDUAL_BLOCK):
            cols = slice(j, j + _RESIDUAL_BLOCK)
            R = X[:, cols] - Vm @ coeff[:, cols]
            squared += float(np.vdot(R, R).real)
    squared = max(squared, 0.0)
    return {"frob": math.sqrt(squared), "squared": squared}


def optimal_tail(sigma, k):
    """``sqrt(sum_{j>k} sigma_j^2)``, accumulated smallest first."""
    v = _spectrum(sigma).values
    if not 0 <= k <= len(v):
        raise ValueError(f"k={k} exceeds spectrum length {len(v)}")
    acc = 0.0
    for x in v[k:][::-1]:
        acc += x * x
    return math.sqrt(acc)


def omega_blocks(Xc, Omega, k, s, factors=None):
    """Split ``V^H Omega`` into ``Omega1`` (first ``l - s`` rows) and ``Omega2``.

    ``V`` are the right singular vectors of ``Xc``.  When ``l - s`` exceeds
    the number of stored singular vectors (``Xc`` has fewer rows than
    columns), the missing null-space directions are taken as the dominant
    left singular vectors of the part of ``Omega`` orthogonal to the stored
    ones; the bounds are invariant to that choice because the matching
    singular values are zero.

    ``Omega2`` is returned lifted back to ``n``-space as
    ``(I - V1 V1^H) Omega``, which has the same singular values as
    ``V2^H Omega``.

    Raises
    ------
    AssumptionViolation
        If ``Omega1`` does not have full row rank
        (``sigma_min <= 1e-12 ||Omega||_2``).
    """
    Om = dense_sketch(Omega)
    l = sketch_width(Omega)
    n = Om.shape[0]
    if not 0 <= s <= l - k:
        raise ValueError(f"need 0 <= s <= l - k = {l - k}, got s={s}")
    if factors is None:
        factors = svd(Xc)
    if factors.V.shape[0] != n:
        raise ValueError(f"sketch has {n} rows, X_c has {factors.V.shape[0]} columns")
    rows = l - s
    V1 = factors.V[:, :rows]
    if V1.shape[1] < rows:
        resid = Om - V1 @ (V1.conj().T @ Om)
        extra = svd(resid).U[:, : rows - V1.shape[1]]
        V1 = np.hstack([V1, extra])
    O1 = V1.conj().T @ Om
    O2 = Om - V1 @ O1
    s1 = singular_values(O1)
    smin = s1[min(O1.shape) - 1] if O1.shape[0] <= O1.shape[1] else 0.0
    # relative to the whole sketch: an O1 made of roundoff has a tiny sigma_max too
    scale = singular_values(Om)[0]
    if smin <= FULL_ROW_RANK_RTOL * scale:
        raise AssumptionViolation(
            f"Omega1 ({O1.shape[0]}x{O1.shape[1]}) lacks full row rank "
            f"(sigma_min={smin:.3e}, ||Omega||_2={scale:.3e})"
        )
    norm_O2 = float(singular_values(O2)[0]) if n > rows else 0.0
    return {
        "Omega1": O1,
        "Omega2": O2,
        "norm_O2": norm_O2,
        "norm_O1_pinv": float(1.0 / smin),
    }


def _product_sq(blocks):
    return (blocks["norm_O2"] * blocks["norm_O1_pinv"]) ** 2


def eta_det(sigma, blocks, k):
    """Deterministic bound from the ``k``-row split of the sketch."""
    tail = optimal_tail(sigma, k)
    return (1.0 + math.sqrt(1.0 + _product_sq(blocks))) * tail


def alpha_gamma(sigma, k, l, s, q_pow):
    """``alpha = sqrt(k) sigma_c r^{2q}`` and ``gamma = (sigma_c / sigma_1) r^{2q}``
    where ``sigma_c = sigma_{l-s+1}`` and ``r = sigma_c / sigma_k``."""
    sp = _spectrum(sigma)
    sk = sp.at(k)
    if sk <= 0.0:
        raise ValueError(f"degenerate spectrum: sigma_k = {sk} for k={k}")
    sc = sp.at(l - s + 1)
    decay = (sc / sk) ** (2 * q_pow)
    return {
        "alpha": math.sqrt(k) * sc * decay,
        "gamma": sc / sp.at(1) * decay,
    }


def eta_det_adv(sigma, blocks, k, l, s, q_pow, sharp=False):
    """Deterministic bound that accounts for power iterations.

    ``blocks`` must come from :func:`omega_blocks` with the same ``s``.
    """
    tail = optimal_tail(sigma, k)
    ag = alpha_gamma(sigma, k, l, s, q_pow)
    x = _product_sq(blocks)
    extra = ag["alpha"] ** 2 * x
    if sharp:
        extra /= 1.0 + ag["gamma"] ** 2 * x
    return math.sqrt(tail * tail + extra)


def _check_feasible(k, p_ovs, n_s):
    if k + p_ovs > n_s:
        raise ValueError(f"k + p_ovs = {k + p_ovs} exceeds n_s = {n_s}")


def eta_prob(sigma, k, p_ovs, n_s):
    """Probabilistic bound ``(1 + sqrt(1 + 6 n_s / l)) * tail``."""
    _check_feasible(k, p_ovs, n_s)
    return (1.0 + math.sqrt(1.0 + 6.0 * n_s / (k + p_ovs))) * optimal_tail(sigma, k)


def eta_prob_adv(sigma, k, p_ovs, q_pow, n_s, sharp=False):
    """Probabilistic bound with power iterations, ``s = 0``."""
    _check_feasible(k, p_ovs, n_s)
    l = k + p_ovs
    tail = optimal_tail(sigma, k)
    ag = alpha_gamma(sigma, k, l, 0, q_pow)
    x = 6.0 * n_s / l
    extra = ag["alpha"] ** 2 * x
    if sharp:
        extra /= 1.0 + ag["gamma"] ** 2 * x
    return math.sqrt(tail * tail + extra)


def eta_prob_factor_form(sigma, k, p_ovs, q_pow, n_s):
    """Loosest form ``sqrt(1 + 6 n_s (sigma_{l+1}/sigma_k)^{4q}) * tail``."""
    _check_feasible(k, p_ovs, n_s)
    sp = _spectrum(sigma)
    ratio = sp.at(k + p_ovs + 1) / sp.at(k)
    return math.sqrt(1.0 + 6.0 * n_s * ratio ** (4 * q_pow)) * optimal_tail(sp, k)


def quasi_opt_constant(n_s, l):
    """``C = (sqrt(1 + 6 n_s / l) + 1)^2``."""
    if not 1 <= l <= n_s:
        raise ValueError(f"need 1 <= l <= n_s, got l={l}, n_s={n_s}")
    return (math.sqrt(1.0 + 6.0 * n_s / l) + 1.0) ** 2


def effectivity(e_frob, eta):
    """Bound over true error; ``inf`` when the error is exactly zero."""
    if eta is None:
        return None
    if e_frob <= 0.0:
        return math.inf
    return eta / e_frob


@dataclass
class BoundReport:
    """Errors, bounds and effectivities of one randomized basis."""

    k: int
    p_ovs: int
    q_pow: int
    s: int
    seed: int
    n_s: int
    e_proj_frob: float
    e_proj_sq: float
    tail: float
    C: float
    failure_prob: float
    alpha: float | None = None
    gamma: float | None = None
    eta_det: float | None = None
    eta_det_adv: float | None = None
    eta_det_adv_sharp: float | None = None
    eta_prob: float | None = None
    eta_prob_adv: float | None = None
    eta_prob_adv_sharp: float | None = None
    eff_det: float | None = None
    eff_det_adv: float | None = None
    eff_prob: float | None = None
    eff_prob_adv: float | None = None
    eff_det_adv_sharp: float | None = None
    eff_prob_adv_sharp: float | None = None
    eff_literal_det: float | None = None
    eff_literal_det_adv: float | None = None
    eff_literal_prob: float | None = None
    eff_literal_prob_adv: float | None = None
    zero_error: bool = False
    violations: list = field(default_factory=list)

    def as_row(self):
        row = asdict(self)
        row["violations"] = ";".join(self.violations)
        return row


def bound_report(Xs, V, Omega, cfg, factors=None, q_pow=None):
    """Evaluate every bound for the basis ``V`` built with sketch ``Omega``.

    ``factors`` (the SVD of ``X_c``) can be passed in to share it across a
    sweep.  Deterministic bounds whose block assumption fails are left as
    ``None`` and the reason is appended to ``violations``.
    """
    Xc = complexify(Xs)
    if factors is None:
        factors = svd(Xc)
    q = cfg.q_pow if q_pow is None else q_pow
    k, p, l, n_s = cfg.k, cfg.p_ovs, cfg.l, Xc.shape[1]
    sp = SingularSpectrum(factors.sigma, source="X_c")
    err = projection_error(Xs, V)
    e = err["frob"]
    rep = BoundReport(
        k=k, p_ovs=p, q_pow=q, s=cfg.s, seed=cfg.seed, n_s=n_s,
        e_proj_frob=e, e_proj_sq=err["squared"], tail=optimal_tail(sp, k),
        C=quasi_opt_constant(n_s, l), failure_prob=2.0 / k,
    )
    rep.zero_error = e <= 0.0
    ag = alpha_gamma(sp, k, l, cfg.s, q)
    rep.alpha, rep.gamma = ag["alpha"], ag["gamma"]

    try:
        blocks = omega_blocks(Xc, Omega, k, l - k, factors)
        rep.eta_det = eta_det(sp, blocks, k)
    except AssumptionViolation as exc:
        rep.violations.append(f"det: {exc}")
    try:
        blocks = omega_blocks(Xc, Omega, k, cfg.s, factors)
        rep.eta_det_adv = eta_det_adv(sp, blocks, k, l, cfg.s, q)
        rep.eta_det_adv_sharp = eta_det_adv(sp, blocks, k, l, cfg.s, q, sharp=True)
    except AssumptionViolation as exc:
        rep.violations.append(f"det_adv: {exc}")

    rep.eta_prob = eta_prob(sp, k, p, n_s)
    rep.eta_prob_adv = eta_prob_adv(sp, k, p, q, n_s)
    rep.eta_prob_adv_sharp = eta_prob_adv(sp, k, p, q, n_s, sharp=True)

    for name in ("det_adv_sharp", "prob_adv_sharp"):
        setattr(rep, f"eff_{name}", effectivity(e, getattr(rep, f"eta_{name}")))
    for name in ("det", "det_adv", "prob", "prob_adv"):
        eta = getattr(rep, f"eta_{name}")
        setattr(rep, f"eff_{name}", effectivity(e, eta))
        literal = None
        if eta is not None:
            literal = err["squared"] / eta if eta > 0 else math.inf
        setattr(rep, f"eff_literal_{name}", literal)
    return rep
