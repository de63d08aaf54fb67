"""Lorentz sequence spaces: quasi-norms, embedding norms and non-compactness evidence."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CoverRefuted,
    DivergentSeries,
    HypothesisViolation,
    Infeasible,
    InvalidArgument,
    InvariantBreach,
    LorentzError,
    TruncationTooSmall,
    UnsupportedPair,
    UnsupportedStudy,
)
from .sequences import (  # noqa: E402
    FiniteSequence,
    Rearrangement,
    distribution,
    rearrange,
    unit_vector,
)
from .norms import (  # noqa: E402
    LorentzParams,
    SpaceDescriptor,
    c0,
    linf,
    lorentz,
    norm,
    quasi_triangle_defect,
    rearrangement_bound_audit,
    scalar_inequality_audit,
    weighted_lp,
)
from .catalog import (  # noqa: E402
    Case,
    EmbeddingSpec,
    EmbeddingVerdict,
    Interval,
    classify,
    series_norm,
    zeta_bracket,
)
from .extremal import (  # noqa: E402
    SearchConfig,
    SearchResult,
    convergence_study,
    estimate_operator_norm,
    riemann_ratio,
)
from .noncompact import (  # noqa: E402
    AlphaBracket,
    CoverCertificate,
    SpanBound,
    WitnessReport,
    alpha_bracket,
    build_constant_cover,
    signflip_witness,
    span_estimate,
    span_upper_bound,
    spread_witness,
    verify_cover,
)
