"""Exact intersection areas of circle arrangements via a subset trellis."""

from .geometry import (
    Circle,
    GeometryError,
    Point,
    ToleranceConfig,
    DEFAULT_TOLERANCE,
    distance_matrix,
    circumference_intersections,
    lens_area,
    triple_area,
    arc_polygon_area,
)
from .trellis import (
    AreaTable,
    RegionSpec,
    SubsetLabel,
    TransitionStructure,
    TrellisError,
    build_transitions,
    compute_all,
    label_vector,
    existence_step,
    area_from_hats,
    special_case_n4,
    region_area,
)
from .oracles import plan_samples, mc_area_table, raster_area_table

__version__ = "0.1.0"
