"""Exact Bergman densities for positive line bundles on complex tori.

The density of states for the k-th power of a polarized bundle on an
abelian variety is an explicit lattice sum: a constant term fixed by
the volume plus one Gaussian-damped cosine per lattice vector.  This
package evaluates that sum with certified truncation tails, checks it
against an independent theta-function oracle, and exposes the
geometric consequences (holonomy of the minimal connection, extremum
localization at rational points, pushforward to the cylinder).
"""

from .config import BundleConfig, bundle_to_dict, load_bundle, parse_bundle
from .cylinder import (
    CylinderParams,
    cyl_holonomy_phase,
    norm_integral_Ia,
    rho_cyl_direct,
    rho_cyl_nd,
    rho_cyl_poisson,
)
from .errors import (
    CharacteristicSolveFailed,
    ConfigParseError,
    CutoffTooSmall,
    DegenerateBasis,
    FitResidualTooLarge,
    InconsistentSystem,
    IntegralityViolation,
    ModulusMismatch,
    NotPositiveDefinite,
    NumericError,
    QuadratureUnconverged,
    RadiusTooLarge,
    SingularGram,
    StepCountTooSmall,
    ValidationError,
)
from .extrema import (
    BundleComparison,
    ExtremumReport,
    HolonomySolutions,
    HolonomyTarget,
    LocalizationRow,
    PushforwardFit,
    compare_bundles,
    find_extrema,
    localization_sweep,
    pushforward_fit,
    pushforward_recover,
    solve_holonomy,
)
from .holonomy import (
    HolonomyResult,
    alpha_series_coeff,
    calibration_report,
    calibration_sign,
    hol_closed,
    hol_ode,
)
from .intlin import extended_gcd_row, smith_normal_form
from .kernel import (
    GridField,
    SeriesResult,
    integral_check,
    offdiag_bound,
    rho_diag,
    rho_gradient,
    rho_grid,
    tail_bound,
    truncation_radius,
)
from .lattice import (
    LatticeVector,
    PolarizedTorus,
    Semicharacter,
    Shells,
    TorusPoint,
    ValidationReport,
    automorphy_factor,
    chi_eval,
    chi_phase_turns,
    enumerate_shifted,
    enumerate_within,
    product_torus,
    rotation_to_cylinder_axis,
    shells,
    standard_torus,
    torus_distance,
    validate,
)
from .theta import GramMatrix, ThetaBasis, build_basis, build_gram, offdiag_oracle, rho_oracle

__all__ = [
    "BundleComparison",
    "BundleConfig",
    "CharacteristicSolveFailed",
    "ConfigParseError",
    "CutoffTooSmall",
    "CylinderParams",
    "DegenerateBasis",
    "ExtremumReport",
    "FitResidualTooLarge",
    "GramMatrix",
    "GridField",
    "HolonomyResult",
    "HolonomySolutions",
    "HolonomyTarget",
    "InconsistentSystem",
    "IntegralityViolation",
    "LatticeVector",
    "LocalizationRow",
    "ModulusMismatch",
    "NotPositiveDefinite",
    "NumericError",
    "PolarizedTorus",
    "PushforwardFit",
    "QuadratureUnconverged",
    "RadiusTooLarge",
    "SeriesResult",
    "Semicharacter",
    "Shells",
    "SingularGram",
    "StepCountTooSmall",
    "ThetaBasis",
    "TorusPoint",
    "ValidationError",
    "ValidationReport",
    "alpha_series_coeff",
    "automorphy_factor",
    "build_basis",
    "calibration_report",
    "calibration_sign",
    "build_gram",
    "bundle_to_dict",
    "chi_eval",
    "chi_phase_turns",
    "compare_bundles",
    "cyl_holonomy_phase",
    "enumerate_shifted",
    "enumerate_within",
    "extended_gcd_row",
    "find_extrema",
    "hol_closed",
    "hol_ode",
    "integral_check",
    "localization_sweep",
    "load_bundle",
    "norm_integral_Ia",
    "offdiag_bound",
    "offdiag_oracle",
    "parse_bundle",
    "product_torus",
    "pushforward_fit",
    "pushforward_recover",
    "rho_cyl_direct",
    "rho_cyl_nd",
    "rho_cyl_poisson",
    "rho_diag",
    "rho_gradient",
    "rho_grid",
    "rho_oracle",
    "rotation_to_cylinder_axis",
    "shells",
    "smith_normal_form",
    "solve_holonomy",
    "standard_torus",
    "tail_bound",
    "torus_distance",
    "truncation_radius",
    "validate",
]
