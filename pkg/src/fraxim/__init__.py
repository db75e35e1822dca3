"""Characteristic impedances of self-similar AC circuits."""
from .circuit import (
    CircuitError,
    Element,
    EvalContext,
    Network,
    NetworkError,
    OpenCircuitError,
    ResonanceError,
    element_impedance,
    make_network,
    merge_nodes,
    network_from_json,
    network_to_json,
)
from .reduce import (
    WeightedGraph,
    boundary_trace,
    delta_to_y,
    effective_impedance,
    eliminate_node,
    evaluate,
    parallel,
    series,
    y_to_delta,
)
from .families import (
    FamilySpec,
    build,
    build_gasket,
    build_hanoi,
    build_ladder,
    build_sg,
    termination_impedance,
    trace_value,
)
from .closedform import (
    FilterBand,
    HanoiSolution,
    hanoi_band,
    hanoi_gamma,
    hanoi_solve,
    ladder_alpha,
    ladder_Z,
    sg_band,
    sg_Z,
)
from .limits import (
    DoubleLimit,
    IterationReport,
    double_limit,
    family_map,
    hanoi_map,
    iterate,
    ladder_map,
    sg_map,
)

__version__ = "0.1.0"
