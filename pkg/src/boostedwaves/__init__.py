"""Pseudospectral toolkit for boosted ground states of dispersion-generalized
NLS equations: spectral fields, Fourier multipliers, rearrangement operators,
a stabilized fixed-point solver, symmetry verification, and interval-union
Minkowski algebra."""

from .errors import (
    ConfigError,
    DisconnectedSupportError,
    GnfFormatError,
    HypothesisViolatedError,
    UnboundedBelowError,
    ZeroFieldError,
)
from .fields import (
    Field,
    Grid,
    NegativeWeightWarning,
    energy_mass,
    eval_at,
    inner,
    norm_hs,
    norm_l2,
    norm_lp,
    quad_form,
    read_gnf,
    transform,
    write_gnf,
)
from .rearrange import (
    BochnerReport,
    RearrangementPlan,
    bochner_check,
    fourier_rearrange,
    schwarz,
    steiner_array,
    steiner_codim,
)
from .setops import (
    IntervalUnion,
    classify_fixed_points,
    is_fixed_point,
    minkowski_power,
    minkowski_sum,
    random_interval_union,
)
from .solver import (
    Problem,
    SolveOptions,
    SolveReport,
    canonicalize,
    centroid,
    gaussian_init,
    minimize,
    profile_residual,
    sigma_star,
    unit_residual,
    weinstein,
)
from .symbols import (
    AssumptionReport,
    BoostedSymbol,
    FloorSearch,
    Symbol,
    ValidationSpec,
    anisotropic_half_wave,
    biharmonic,
    check_assumptions,
    custom,
    dispersion_floor,
    eval_symbol,
    fractional,
    galilean_gauge,
    half_wave,
    sqrt_klein_gordon,
)
from .verify import (
    PhaseFit,
    SupportSet,
    SymmetryReport,
    is_connected,
    minkowski_defect,
    phase_affinity,
    support_set,
    symmetry_report,
)

__version__ = "0.1.0"
