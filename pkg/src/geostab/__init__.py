"""Exact numerics for geometric stability conditions on surfaces."""

from .chern import (
    ChernCharacter,
    bogomolov_ok,
    discriminant,
    line_bundle,
    normalized_slope,
    parse_character,
    skyscraper,
    slope,
    twist,
)
from .contraction import (
    ContractionPath,
    PathReport,
    PathSample,
    base_contraction,
    canonical_base,
    contract,
    g_majorant,
    homotopy_F,
    homotopy_G,
    pinch_demo,
    verify_path,
)
from .errors import *  # noqa: F401,F403
from .lattice import (
    SurfaceData,
    ValidatedSurface,
    is_ample,
    load_surface,
    pair,
    signature,
    validate_surface,
)
from .lepotier import (
    CLOSED,
    PUNCTURED,
    EnumerationBox,
    PhiBracket,
    enumerate_candidates,
    merge_sups,
    phi_at_slope,
    phi_profile,
    phi_upper,
)
from .rational import NEG_INF, POS_INF, Q, RationalComplex
from .region import (
    BaseCoordinate,
    ChargeValue,
    GeoPoint,
    Verdict,
    central_charge,
    charge_at_origin,
    charge_positivity_check,
    membership,
    support_probe,
    verify_membership,
)

__version__ = "0.1.0"
