"""Motion planning for planar polygonal linkages.

The configuration space of a closed chain of rigid bars carries a
regular cell decomposition whose cells are named by cyclically ordered
partitions of the bar indices into "short" parts.  This package models
that combinatorics exactly, navigates the vertex-edge graph in a bounded
number of steps (at most 13 between any two vertices of a connected
space), realizes labels as planar configurations, and synthesizes
continuous motions whose elementary steps are convex-quadrilateral
flexes.
"""

from .linkage import (
    CyclicPartition,
    Linkage,
    LinkageError,
    Move,
    Path,
    PathStep,
    apply_move,
    canonicalize,
    edge_endpoints,
    find_move,
    is_admissible,
    mirror,
    new_linkage,
    orientation_class,
    partition,
    refines,
)
from .cells import (
    CellCensus,
    Graph,
    betti_numbers,
    build_graph,
    census,
    components,
    count_cells,
    diameter,
    enumerate_cells,
    euler_characteristic,
    predicted_vertex_count,
    shortest_path,
    valence,
)
from .navigate import (
    PlanReport,
    is_bow,
    plan,
    plan_bow,
    plan_to_target_or_mirror,
    turn_inside_out,
    validate_path,
)
from .geometry import (
    Configuration,
    FlexOptions,
    Motion,
    MotionSegment,
    cell_label,
    convexify,
    edge_flex,
    entry_vertex,
    intra_cell_flex,
    realize_edge_point,
    realize_vertex,
    snap_configuration,
    synthesize_motion,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
