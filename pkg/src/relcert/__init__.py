"""Relative eigenvalue certificates for compressions of invertible indefinite symmetric matrices."""

from .angles import AngleReport, GraphRotation, angle_bound, annular_residuals, graph_tangent, max_angle
from .certify import (
    Certificate,
    EssentialModel,
    Match,
    Verdict,
    certify,
    certify_gap,
    certify_negative,
    match_indices,
    oracle_match,
)
from .config import Tolerances, get_tolerances, set_tolerances, tolerances
from .errors import *  # noqa: F401,F403
from .gap import (
    GapConditionReport,
    GapWindow,
    RelativeBoundParams,
    form_sandwich_check,
    gap_condition,
    guaranteed_interval,
    minimax_sample,
    perturbed_compare,
    relbound_check,
)
from .harness import InstanceSpec, gen_instance, run_batch
from .linalg import (
    OrthonormalBasis,
    SpectralCut,
    SymmetricOperator,
    operator_norm,
    orthonormalize,
    spectral_projector,
    sym_eig,
    variational_values,
)
from .split import (
    CompressionSetup,
    ObliqueProjector,
    OperatorSplit,
    compress,
    diag_off_split,
    image_subspaces,
    oblique_projection,
    setup,
    verify_factorization,
)

__version__ = "0.1.0"
