"""Discrete-time simulator of energy-limited mobile ad hoc networks.

Nodes wander an L x L torus, forward packets over radius-r links with an
energy/distance-weighted random routing rule, and die when the first node
exhausts its energy. The package reproduces the four traffic-congestion
regimes of such networks, validates analytic lifetime predictions against
simulation, and ships a sweep harness over all model parameters.
"""

from .config import SimConfig, RngStreams
from .errors import (
    BracketError,
    ConfigurationError,
    InsufficientDataError,
    OutputError,
)
from .mobility import Kinematics, init_world, step_positions, toroidal_distance
from .neighbors import GridIndex, brute_force_neighbors, neighbors_of, rebuild_index
from .traffic import (
    DeliveryStats,
    NetworkState,
    NodeState,
    Packet,
    deliver_step,
    generate_packets,
    is_dead,
    routing_weights,
    select_next_hop,
    traffic_step,
)
from .metrics import (
    ClassifierThresholds,
    DEFAULT_THRESHOLDS,
    RunSeries,
    StepRecord,
    TrafficState,
    characteristic_time,
    classify_state,
    congested_count,
    delta_s,
    energy_range,
    find_critical_rates,
)
from .lifetime import (
    LifetimeInputs,
    effective_throughput,
    extract_k,
    predict_absolute,
    predict_general,
    predict_no_congestion,
    predict_unified,
)
from .harness import (
    ReplicaSet,
    RunSummary,
    SweepTable,
    run_replicas,
    run_simulation,
    summarize_run,
    sweep,
)
from .output import emit_outputs

__version__ = "0.1.0"

__all__ = [
    "SimConfig", "RngStreams",
    "ConfigurationError", "InsufficientDataError", "BracketError", "OutputError",
    "Kinematics", "init_world", "step_positions", "toroidal_distance",
    "GridIndex", "rebuild_index", "neighbors_of", "brute_force_neighbors",
    "Packet", "NodeState", "NetworkState", "DeliveryStats",
    "generate_packets", "routing_weights", "select_next_hop", "deliver_step",
    "is_dead", "traffic_step",
    "StepRecord", "RunSeries", "TrafficState", "ClassifierThresholds", "DEFAULT_THRESHOLDS",
    "congested_count", "delta_s", "energy_range", "characteristic_time",
    "classify_state", "find_critical_rates",
    "LifetimeInputs", "effective_throughput",
    "predict_general", "predict_no_congestion", "predict_absolute", "predict_unified",
    "extract_k",
    "RunSummary", "ReplicaSet", "SweepTable",
    "run_simulation", "summarize_run", "run_replicas", "sweep",
    "emit_outputs",
]
