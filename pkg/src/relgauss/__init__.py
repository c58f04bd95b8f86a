"""Gaussian-state tools for centre-of-mass / relative descriptions of massive particles."""

from .entanglement import (
    AuditRecord,
    AuditReport,
    Bipartition,
    audit_purity_formulas,
    cm_relative_cut,
    log_negativity,
    partial_transpose,
    purity,
)
from .gaussian import (
    GaussianState,
    NumericFailure,
    SingleModeParams,
    direct_sum,
    is_physical,
    single_mode_cov,
    symplectic_eigenvalues,
    symplectic_form,
    wigner_eval,
)
from .partition import (
    ParticleSystem,
    PartitionTransform,
    cmr_cov,
    cmr_matrix,
    cmr_matrix_from_fractions,
    delete_modes,
    relational_cov,
    transform_cov,
    transform_mean,
)
from .twirl import (
    FiniteBipartiteState,
    FiniteGroupAction,
    boost_twirl,
    compact_twirl,
    divergence_scan,
    relational_state,
    translation_twirl,
)

__version__ = "0.1.0"
