"""Fast simulator and design-library tools for flow-based microfluidic grid mixers."""

from .dual import (
    PRECEDES,
    RELATED,
    SUCCEEDS,
    DualGraph,
    DualOrderQuery,
    MonotonicityViolation,
    build_dual,
    check_monotonicity,
)
from .engine import OutletReport, OutletResult, SimulationResult, simulate, simulate_full
from .errors import (
    CycleError,
    DesignError,
    DualOrderError,
    GenerationFailure,
    GridMixerError,
    InvalidDesignError,
    NoPathError,
    SingularSystemError,
    UnclassifiableNodeError,
)
from .flow import (
    DirectedGrid,
    FlowSolution,
    JoinNode,
    JoinSplitNode,
    SplitNode,
    StagePlan,
    StraightChannel,
    orient,
    plan_stages,
    solve_flow,
)
from .generate import (
    DesignLibrary,
    GeneratorParams,
    InletSpec,
    LibraryEntry,
    populate_library,
    query_library,
    random_grid,
)
from .model import (
    FluidSpec,
    GridDesign,
    Inlet,
    Issue,
    ValidationReport,
    parse_design,
    prune_dead_ends,
    serialize_design,
    validate,
)
from .profiles import (
    SPProfile,
    advance_straight,
    diffuse,
    implied_mixing_time,
    join_profiles,
    join_split,
    split_profile,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
