"""Coverings of convex bodies by smaller homothets, illumination numbers,
and related affine invariants, with verified certificates throughout."""

from .bodies import (
    AffineImage,
    Ball,
    Body,
    DirectSum,
    DomainError,
    MinkowskiSum,
    Polytope,
    ValidationError,
    difference_body,
    interior_point,
    normal_cone,
)
from .geometry import (
    AffineMap,
    ConvergenceError,
    JohnReport,
    contains,
    gauge,
    gauge_many,
    gauge_norm,
    is_o_symmetric,
    john_sandwich,
    support,
    support_many,
    support_points,
)
from .search import SearchConfig
from .covering import (
    BudgetError,
    CoinReport,
    CoverCertificate,
    CoverConfig,
    Homothet,
    coin,
    coin_product_bounds,
    coin_report,
    covering_parameter_report,
    covering_parameter_upper,
    covers,
    gamma_m,
    n_lambda,
    tightly_covered_check,
    tightly_covered_report,
    weak_coin,
)
from .illumination import (
    IlluminationCertificate,
    IlluminationConfig,
    XrayConfig,
    illuminates_dir,
    illuminates_point,
    illumination_number_polygon,
    illumination_number_upper,
    illumination_parameter,
    verify_illumination,
    xray_number_polygon,
)
from .bmdist import bm_distance_upper
from .zong import (
    NetAuditReport,
    NetElement,
    build_net_element,
    cap_cover,
    enumerate_net,
    load_net,
    net_cardinality_bound,
    save_net,
    zong_audit,
)
from .serialization import RunRecord, SchemaError, body_hash, canonical_json, parse_body
from .render import render_svg

__version__ = "0.1.0"

__all__ = [
    "AffineImage", "AffineMap", "Ball", "Body", "BudgetError", "CoinReport",
    "ConvergenceError", "CoverCertificate", "CoverConfig", "DirectSum",
    "DomainError", "Homothet", "IlluminationCertificate", "IlluminationConfig",
    "JohnReport", "MinkowskiSum", "NetAuditReport", "NetElement", "Polytope",
    "RunRecord", "SchemaError", "SearchConfig", "ValidationError", "XrayConfig",
    "bm_distance_upper", "body_hash", "build_net_element", "canonical_json",
    "cap_cover", "coin", "coin_product_bounds", "coin_report", "contains",
    "covering_parameter_report", "covering_parameter_upper", "covers",
    "difference_body", "enumerate_net", "gamma_m", "gauge", "gauge_many",
    "gauge_norm", "illuminates_dir", "illuminates_point",
    "illumination_number_polygon", "illumination_number_upper",
    "illumination_parameter", "interior_point", "is_o_symmetric",
    "john_sandwich", "load_net", "n_lambda", "net_cardinality_bound",
    "normal_cone", "parse_body", "render_svg", "save_net", "support",
    "support_many", "support_points", "tightly_covered_check",
    "tightly_covered_report", "verify_illumination", "weak_coin",
    "xray_number_polygon", "zong_audit",
]
