"""spectraplex: interlayer weight design for two-layer multiplex networks.

The package solves three certified convex design problems over the budget
simplex of interlayer weights -- maximize the algebraic connectivity,
minimize the spectral radius, minimize the spectral width -- and extracts
the geometric realizations encoded by their dual solutions.
"""

from .errors import (
    CertificateError,
    DomainError,
    GenerationError,
    InputError,
    SpectraplexError,
)
from .graphs import (
    LayerGraph,
    MultiplexSpec,
    ValidationReport,
    WeightAllocation,
    assemble_supra_laplacian,
    build_layer_laplacian,
    load_multiplex,
    save_multiplex,
    validate_multiplex,
)
from .generators import generate_layer
from .spectral import (
    BoundsReport,
    SpectrumSummary,
    ThresholdReport,
    eig_symmetric_clustered,
    pseudoinverse,
    spectral_bounds,
    threshold_c1_star,
    threshold_c_star,
    threshold_report,
)
from .optimize import (
    DualCertificate,
    FastPathRefusal,
    ObjectiveKind,
    OptimizationResult,
    SolverOptions,
    duality_gap,
    maximize_lambda2,
    minimize_lambda_n,
    minimize_width,
    nodal_fast_path,
    recover_dual_certificate,
    solve,
    uniform_fast_path,
)
from .embedding import (
    EmbeddingRealization,
    ScaledEmbedding,
    SeparatorSpec,
    TensionReport,
    antipodal_check,
    clump_check,
    embedding_from_result,
    fiedler_band_separator,
    gram_embed,
    projection_residual,
    scaled_embedding,
    separator_shadow_check,
    small_budget_embedding_check,
    solve_tensions,
)
from .oracle import (
    GridSearchReport,
    KktReport,
    grid_search_simplex,
    kkt_check,
    monotonicity_probe,
)
from .sweep import (
    CorrelationTable,
    SweepResult,
    correlate_centralities,
    sweep_budget,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
