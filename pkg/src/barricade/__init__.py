"""barricade: optimal segment-barrier placement in polygonal domains.

Path mode: place sticks to maximize the shortest s-t path length.
Flow mode: place sticks to minimize the S-T max-flow (min-cut shortening).
"""

from .geometry import Point, Segment, orientation
from .domain import PolygonalDomain, ToleranceConfig, validate_domain

__all__ = [
    "Point",
    "Segment",
    "orientation",
    "PolygonalDomain",
    "ToleranceConfig",
    "validate_domain",
]

__version__ = "0.1.0"
