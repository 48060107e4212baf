"""Exact combinatorics of blown-up Lattes maps on the square pillow.

Build a flapped pillow from a spec, pull back curves of rational slope,
and iterate the resulting slope map.
"""

from .slopes import (
    PERIPHERAL,
    ExtendedSlope,
    Peripheral,
    Slope,
    complexity,
    enumerate_slopes,
    format_slope,
    intersection_curve_arc,
    intersection_curves,
    normalize_slope,
    parse_slope,
)
from .complex import (
    EdgeAddress,
    FlappedPillow,
    JuliaType,
    OrbifoldKind,
    PillowSpec,
    SpecError,
    build_pillow,
    corner_spec,
    iter_specs,
    julia_type,
    list_edges,
    load_spec,
    orbifold_signature,
    plain_spec,
    spec_from_dict,
)
from .pullback import (
    canonical_geodesic,
    eliminate_obstruction,
    is_obstruction,
    pullback_components,
    slope_map,
    thurston_coefficient,
)
from .annuli import annulus_components, essential_circuit_length, preimage_graph
from .dynamics import attractor, fixed_slopes, monotonicity_scan, orbit, relation_check_3x3

__version__ = "0.1.0"
