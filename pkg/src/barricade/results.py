"""Result containers shared by the optimizers and the brute-force oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .geodesic import GeodesicPath
from .geometry import Point, Segment


@dataclass
class PlacementSolution:
    barriers: List[Segment]
    objective: float                       # math.inf encodes full blockage
    roots: List[Optional[Point]]           # rooted endpoint per barrier
    certificate: Optional[GeodesicPath] = None
    blocked_witness: Optional[Segment] = None
    supremum_limited: bool = False
    algorithm: str = ""
    meta: Dict = field(default_factory=dict)

    @property
    def blocked(self) -> bool:
        return math.isinf(self.objective)


@dataclass
class FlowSolution:
    flow_before: float
    flow_after: float
    cut_path: List[object]                 # node sequence "B" .. "T"
    placements: List[Dict]                 # {"edge": (u,v), "offset": float, "length": float}
    algorithm: str = ""
    meta: Dict = field(default_factory=dict)
