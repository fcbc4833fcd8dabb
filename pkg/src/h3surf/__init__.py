"""Curvature and Gauss-map toolkit for graph surfaces in the 3-dimensional
Heisenberg group: group geometry, fundamental forms, the plane-model normal
map, classified translation-surface families, and numerical verification
oracles for every closed form."""

from .errors import DomainError, NotAGraphError
from .expressions import (
    ParseError,
    evaluate,
    jet2_at,
    jet3_curve_at,
    parse_curve,
    parse_surface,
    to_string,
)
from .families import (
    CurvePair,
    FlatGeneral,
    FlatPower,
    FlatPowerNormalization,
    FlatZeroDet,
    MinimalFamily,
    ResidualReport,
    build_graph,
    curve_from_expression,
    family_curves,
    flat_necessary_residuals,
    flat_translation_residual,
    gauss_det,
    minimal_translation_residual,
    ode_solve_v,
    residual_report,
)
from .gans import DiskPoint, GansPoint, disk_to_gans, gans_metric, gans_to_disk, psi
from .gaussmap import (
    GaussMapSample,
    curvature_sample,
    equivariance_check,
    gauss_jacobian,
    gauss_map,
    gauss_map_sample,
    verify_gauss_differential,
)
from .heisenberg import (
    AlgebraVector,
    GroupPoint,
    IsometryElement,
    ReflectionFlip,
    RotationZ,
    apply_isometry,
    connection,
    frame_at,
    inverse,
    isometry_inverse,
    metric_at,
    product,
)
from .jets import CurveJet3, Jet2
from .numerics import (
    DenseSolution,
    OdeError,
    OdeProblem,
    OrderEstimate,
    convergence_order,
    fd_derivative,
    ode_integrate,
    rk4_fixed,
)
from .surfaces import (
    CurvatureSample,
    FundamentalForms,
    Grid,
    Rect,
    SurfacePatch,
    expression_patch,
    first_form,
    flat_residual,
    fundamental_forms,
    gauss_curvature,
    mean_curvature,
    minimal_residual,
    second_form,
    tangent_frame,
    unit_normal,
)

__version__ = "0.1.0"
