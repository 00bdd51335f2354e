"""Differential geometry of strictly accretive matrices.

Symmetric polar decomposition ``A = P U P``, phases, Finsler geodesics and
distances built from symmetric gauge functions and product functions,
bounded-log-rank approximation and the geometric mean.
"""

from .approx import (
    LogRankApprox,
    LogRankResult,
    closest_au,
    closest_logrank,
    closest_pd,
    log_rank,
    truncate_pd_logrank,
    truncate_unitary_logrank,
)
from .config import Tolerances, get_tolerances, tolerances
from .errors import (
    AccretiveGeoError,
    BranchCut,
    ConsistencyError,
    ConvergenceFailure,
    DomainError,
    DomainExit,
    EigFailure,
    InvalidInput,
    InvalidSpec,
    MatrixDomainError,
    NotAccretive,
    NotAccretiveUnitary,
    NotHermitian,
    NotNormal,
    NotPositiveDefinite,
    NotSectorial,
    NotSkewHermitian,
    NumericalFailure,
    ParseError,
    PhaseOutOfSector,
    Singular,
)
from .finsler import (
    GaugeFunction,
    MetricConfig,
    ProductFunction,
    gauge_eval,
    product_eval,
    tangent_norm_AU,
    tangent_norm_P,
    validate_gauge,
    validate_product,
)
from .geometry import (
    ArcLength,
    ComponentCurve,
    GeodesicA,
    arc_length,
    check_distance_properties,
    distance_A,
    distance_AU,
    distance_components,
    distance_P,
    geodesic,
    geodesic_A,
    geodesic_AU,
    geodesic_P,
)
from .io import parse_matrix, serialize_matrix
from .manifold import (
    SectorialDecomp,
    SectorialReport,
    SymPolar,
    accretivity_margin,
    check_accretive,
    is_accretive,
    is_sectorial,
    path_to_identity,
    phases,
    rotate_to_accretive,
    sectorial_decomposition,
    sym_polar,
)
from .matcore import (
    cartesian_parts,
    eig_hermitian,
    eig_normal,
    expm_hermitian,
    expm_skew,
    log_unitary,
    logm_pd,
    polar,
    polar_newton,
    simdiag_congruence,
    sqrt_principal,
    sqrtm_pd,
)
from .mean import congruence_mean, geometric_mean, midpoint_mean_report, riccati_residual
from .sampling import Sample, SamplerSpec, sample

__version__ = "0.1.0"
