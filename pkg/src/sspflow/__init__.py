"""Min-cost flow by successive shortest paths, plus a perturbation lab.

The package has three layers:

* core: flow networks, the single source/sink transform, residual views,
  DIMACS-style file I/O (``network``, ``dimacs``)
* solver: the successive-shortest-path algorithm with full step traces
  and the value-vs-cost profile (``solver``)
* laboratory: structural checks on traces, flow reconstruction from a
  single residual arc, perturbed-instance generators, and the
  exponential worst-case family (``analysis``, ``generators``,
  ``lowerbound``)
"""

from .analysis import (
    FlowClassification,
    GapReport,
    LemmaCheck,
    LemmaReport,
    ReconstructionCase,
    check_lemmas,
    check_reconstruction,
    classify,
    gap_report,
    harvest_reconstruction_cases,
    reconstruct,
    reference_solve,
    replay_flows,
    verify_optimality,
)
from .dimacs import read_instance, write_instance
from .errors import (
    AuxiliaryArc,
    BadParams,
    BalanceMismatch,
    FlowError,
    InfeasibleFlow,
    InfeasibleShape,
    InternalInvariantError,
    InvalidInterval,
    InvariantError,
    IterationCapExceeded,
    LemmaViolation,
    NoPath,
    ParseError,
    PredictionMismatch,
)
from .generators import (
    SmoothedCostSpec,
    Topology,
    adversarial_spec,
    assign_integer_costs,
    bipartite_topology,
    effective_phi,
    erdos_topology,
    format_cost_spec,
    layered_topology,
    parse_cost_spec,
    perturbed_integer,
    random_topology,
    sample_costs,
)
from .lowerbound import (
    HardInstance,
    LowerBoundParams,
    LowerBoundReport,
    StageInstance,
    build_hard_instance,
    build_stage1,
    build_worstcase,
    extend_stage,
    stage_sequence,
    verify_count,
)
from .network import (
    AUXILIARY,
    ORIGINAL,
    Edge,
    Flow,
    FlowNetwork,
    ResidualView,
    TransformedNetwork,
    arc_edge,
    arc_is_forward,
    arc_reverse,
    as_transformed,
    check_feasible,
    flow_from_values,
    residual,
    transform,
    zero_flow,
)
from .solver import (
    AugmentationStep,
    AugmentationTrace,
    CostFunction,
    Outcome,
    cost_function,
    cost_function_from_steps,
    max_flow_value,
    run_ssp,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "AUXILIARY",
    "ORIGINAL",
    "AugmentationStep",
    "AugmentationTrace",
    "AuxiliaryArc",
    "BadParams",
    "BalanceMismatch",
    "CostFunction",
    "Edge",
    "Flow",
    "FlowClassification",
    "FlowError",
    "FlowNetwork",
    "GapReport",
    "HardInstance",
    "InfeasibleFlow",
    "InfeasibleShape",
    "InternalInvariantError",
    "InvalidInterval",
    "InvariantError",
    "IterationCapExceeded",
    "LemmaCheck",
    "LemmaReport",
    "LemmaViolation",
    "LowerBoundParams",
    "LowerBoundReport",
    "NoPath",
    "Outcome",
    "ParseError",
    "PredictionMismatch",
    "ReconstructionCase",
    "ResidualView",
    "SmoothedCostSpec",
    "StageInstance",
    "Topology",
    "TransformedNetwork",
    "adversarial_spec",
    "arc_edge",
    "arc_is_forward",
    "arc_reverse",
    "as_transformed",
    "assign_integer_costs",
    "bipartite_topology",
    "build_hard_instance",
    "build_stage1",
    "build_worstcase",
    "check_feasible",
    "check_lemmas",
    "check_reconstruction",
    "classify",
    "cost_function",
    "cost_function_from_steps",
    "effective_phi",
    "erdos_topology",
    "flow_from_values",
    "format_cost_spec",
    "gap_report",
    "harvest_reconstruction_cases",
    "layered_topology",
    "max_flow_value",
    "parse_cost_spec",
    "perturbed_integer",
    "random_topology",
    "read_instance",
    "reconstruct",
    "reference_solve",
    "replay_flows",
    "residual",
    "run_ssp",
    "sample_costs",
    "solve",
    "stage_sequence",
    "transform",
    "verify_count",
    "verify_optimality",
    "write_instance",
    "zero_flow",
]
