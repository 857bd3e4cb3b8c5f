"""Horizontal-perimeter variational toolkit on the first Heisenberg group.

Exact first and second derivatives travel through a small forward-mode jet
algebra, surface quantities come from defining functions, integrals from an
adaptive Gauss-Kronrod scheme with deterministic compensated accumulation,
and the instability of the ruled minimal graphs x = y (alpha t + beta) is
certified by explicit cutoff deformations with negative second variation.
"""

from .core import (
    IDENTITY,
    Jet,
    Point,
    ScalarField,
    dilation,
    flat_exp,
    frame_derivative,
    frame_second,
    group_inverse,
    group_mul,
    jet_abs,
    jet_cos,
    jet_exp,
    jet_sin,
    jet_sqrt,
    smooth_step,
)
from .graphs import AlphaBetaGraph, SwappedGraph, VerticalPlane
from .identities import ibp_residuals, point_identity_residuals, random_smooth_field
from .instability import (
    PROFILE_ID,
    InstabilityCertificate,
    ScanExhaustedError,
    a_k_field,
    certify_instability,
    cutoff,
    cutoff_prime,
    f_k,
    f_k_prime,
    hardy_limits,
    hardy_sides,
    profile_constant,
    u_k_field,
)
from .intrinsic import (
    IntrinsicGraph,
    burgers,
    family_phi,
    graph_first_variation,
    graph_mean_curvature,
    graph_perimeter,
    lift,
    lift_patch,
    lift_point,
    plane_phi,
)
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    compensated_sum,
    compensated_term_sum,
    integrate_1d,
    integrate_2d,
)
from .surfaces import (
    CHARACTERISTIC_RTOL,
    CharacteristicPointError,
    ChartDegenerateError,
    FrameData,
    LevelSurface,
    SurfaceFrame,
    SurfacePatch,
    a_coefficient,
    h_mean_curvature,
    h_perimeter_integral,
    integrate_on_surface,
    surface_frame,
    y_derivative,
    z_derivative,
)
from .variation import (
    DeformationField,
    VariationResult,
    extend_profile,
    first_variation,
    nu_deformation,
    pulled_back_form,
    pulled_back_nu,
    pulled_back_x1,
    second_variation_general,
    second_variation_nu,
    second_variation_x1,
    zero_field,
)

__version__ = "0.1.0"

__all__ = [
    "IDENTITY",
    "Jet",
    "Point",
    "ScalarField",
    "dilation",
    "flat_exp",
    "frame_derivative",
    "frame_second",
    "group_inverse",
    "group_mul",
    "jet_abs",
    "jet_cos",
    "jet_exp",
    "jet_sin",
    "jet_sqrt",
    "smooth_step",
    "AlphaBetaGraph",
    "SwappedGraph",
    "VerticalPlane",
    "ibp_residuals",
    "point_identity_residuals",
    "random_smooth_field",
    "PROFILE_ID",
    "InstabilityCertificate",
    "ScanExhaustedError",
    "a_k_field",
    "certify_instability",
    "cutoff",
    "cutoff_prime",
    "f_k",
    "f_k_prime",
    "hardy_limits",
    "hardy_sides",
    "profile_constant",
    "u_k_field",
    "IntrinsicGraph",
    "burgers",
    "family_phi",
    "graph_first_variation",
    "graph_mean_curvature",
    "graph_perimeter",
    "lift",
    "lift_patch",
    "lift_point",
    "plane_phi",
    "DEFAULT_SPEC",
    "QuadratureSpec",
    "compensated_sum",
    "compensated_term_sum",
    "integrate_1d",
    "integrate_2d",
    "CHARACTERISTIC_RTOL",
    "CharacteristicPointError",
    "ChartDegenerateError",
    "FrameData",
    "LevelSurface",
    "SurfaceFrame",
    "SurfacePatch",
    "a_coefficient",
    "h_mean_curvature",
    "h_perimeter_integral",
    "integrate_on_surface",
    "surface_frame",
    "y_derivative",
    "z_derivative",
    "DeformationField",
    "VariationResult",
    "extend_profile",
    "first_variation",
    "nu_deformation",
    "pulled_back_form",
    "pulled_back_nu",
    "pulled_back_x1",
    "second_variation_general",
    "second_variation_nu",
    "second_variation_x1",
    "zero_field",
    "__version__",
]
