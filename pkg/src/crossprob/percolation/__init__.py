"""Bond percolation on rectangles: sampling, crossing verdicts, Monte Carlo estimates."""
from .estimate import CrossingEstimate, estimate
from .lattice import BondConfig, LatticeSpec, sample_config
from .unionfind import (
    UnionFind,
    crossing_verdicts,
    dual_complement,
    has_horizontal_crossing,
    has_hv_crossing,
    has_vertical_crossing,
)

__all__ = [
    "BondConfig",
    "CrossingEstimate",
    "LatticeSpec",
    "UnionFind",
    "crossing_verdicts",
    "dual_complement",
    "estimate",
    "has_horizontal_crossing",
    "has_hv_crossing",
    "has_vertical_crossing",
    "sample_config",
]
