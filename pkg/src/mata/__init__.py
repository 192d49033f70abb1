"""Multi-atomic annealing solver for the static dial-a-ride problem."""

from .bench import BKS, gap, lookup_bks, run_bench, run_trial, summarize
from .engine import (
    AnnealResult,
    EngineConfig,
    anneal,
    best_insertion,
    build_random_list,
    build_sorted_list,
    burn,
    construct,
    reform,
    step_temperature,
)
from .instance import (
    InfeasibleRequestError,
    Instance,
    ParseError,
    Request,
    Vertex,
    format_instance,
    load_instance,
    parse_instance,
    tighten_time_windows,
    travel_time,
)
from .kernel import BACKEND as KERNEL_BACKEND
from .oracle import OracleGuardError, OracleResult, exact_solve
from .schedule import (
    Route,
    RouteStructureError,
    Schedule,
    Solution,
    Violations,
    cost,
    empty_solution,
    evaluate_route,
    format_solution,
    is_complete,
    is_feasible,
    read_solution,
    violations,
    write_solution,
)
from .trace import TraceRecord, read_trace, write_trace
from .validate import ValidationReport, Validator, validate

__version__ = "0.1.0"
