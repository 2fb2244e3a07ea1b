"""Tour optimization over circle neighborhoods.

Pick one point inside each of N circles and a visiting order so the closed
tour through the points is as short as possible. Phase 1 searches tours over
per-circle arc-midpoint discretization nodes (exact dynamic program,
cutting-plane branch-and-bound, or a 2-opt heuristic); phase 2 refines the
points continuously for the fixed sequence.
"""

from .discrete import (
    NodeGraph,
    build_node_graph,
    find_subtours,
    reoptimize_slots,
    solve_cutting_plane,
    solve_exact_dp,
    solve_heuristic,
)
from .geometry import (
    DiscreteNode,
    SectorBox,
    node_distance,
    node_point,
    project_to_disk,
    sector_box,
    segment_disk_hit,
    slot_angle,
)
from .kernels import backend_name
from .model import (
    Circle,
    ContinuousSolution,
    DiscreteTour,
    GenerationError,
    Instance,
    InstanceFormatError,
    SizeLimitError,
    SolverConfig,
    TspcnError,
    ValidationError,
    generate_instance,
    load_instance,
    load_solution,
    save_instance,
    save_solution,
)
from .pipeline import (
    LowerBound,
    SolveReport,
    extract_sequence,
    lower_bound,
    solve_two_phase,
    validate_solution,
)
from .refine import (
    FeasibleRegion,
    RefineTrace,
    build_regions,
    point_subproblem,
    sequence_refine,
)
from .render import RenderStyle, render_svg

__version__ = "0.1.0"

__all__ = [
    "Circle",
    "ContinuousSolution",
    "DiscreteNode",
    "DiscreteTour",
    "FeasibleRegion",
    "GenerationError",
    "Instance",
    "InstanceFormatError",
    "LowerBound",
    "NodeGraph",
    "RefineTrace",
    "RenderStyle",
    "SectorBox",
    "SizeLimitError",
    "SolveReport",
    "SolverConfig",
    "TspcnError",
    "ValidationError",
    "backend_name",
    "build_node_graph",
    "build_regions",
    "extract_sequence",
    "find_subtours",
    "generate_instance",
    "load_instance",
    "load_solution",
    "lower_bound",
    "node_distance",
    "node_point",
    "point_subproblem",
    "project_to_disk",
    "render_svg",
    "reoptimize_slots",
    "save_instance",
    "save_solution",
    "sector_box",
    "segment_disk_hit",
    "sequence_refine",
    "slot_angle",
    "solve_cutting_plane",
    "solve_exact_dp",
    "solve_heuristic",
    "solve_two_phase",
    "validate_solution",
]
