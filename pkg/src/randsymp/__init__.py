"""Randomized ortho-symplectic basis generation for Hamiltonian model reduction."""
from .bounds import (
    BoundReport,
    SingularSpectrum,
    alpha_gamma,
    bound_report,
    effectivity,
    eta_det,
    eta_det_adv,
    eta_prob,
    eta_prob_adv,
    omega_blocks,
    optimal_tail,
    projection_error,
    quasi_opt_constant,
)
from .errors import (
    AssumptionViolation,
    ConvergenceError,
    GapError,
    RandSympError,
    RankError,
    SnapshotFormatError,
    StructureError,
)
from .sketching import SketchConfig, SrftSketch, power_sketch, srft_apply, srft_new, srft_threshold
from .symplectic import (
    METHODS,
    OrthoSymplecticBasis,
    SnapshotMatrix,
    build_basis,
    check_structure,
    complexify,
    csvd,
    map_A,
    rcsvd,
    rcsvd_real,
)

__all__ = [
    "BoundReport",
    "SingularSpectrum",
    "alpha_gamma",
    "bound_report",
    "effectivity",
    "eta_det",
    "eta_det_adv",
    "eta_prob",
    "eta_prob_adv",
    "omega_blocks",
    "optimal_tail",
    "projection_error",
    "quasi_opt_constant",
    "AssumptionViolation",
    "ConvergenceError",
    "GapError",
    "RandSympError",
    "RankError",
    "SnapshotFormatError",
    "StructureError",
    "SketchConfig",
    "SrftSketch",
    "power_sketch",
    "srft_apply",
    "srft_new",
    "srft_threshold",
    "METHODS",
    "OrthoSymplecticBasis",
    "SnapshotMatrix",
    "build_basis",
    "check_structure",
    "complexify",
    "csvd",
    "map_A",
    "rcsvd",
    "rcsvd_real",
]

__version__ = "0.1.0"
