"""Edge-based cascading failure simulation on WS and BA networks."""

from .attack import AttackStrategy, select_attack_set
from .cascade import CascadeResult, RoundTrace, run_cascade
from .experiment import ExperimentConfig, SweepRecord, run_sweep, run_threshold_table
from .graph import EdgeListFormatError, GraphInputError, Network, dump_edge_list, load_edge_list
from .loadmodel import EdgeLoadState, EdgeStatus, ModelError, ModelParams, TransferMode
from .metrics import AttackMode, GammaResult, ThresholdResult, epsilon_grid, find_epsilon_threshold, gamma
from .netgen import BaParams, Topology, WsParams, generate_ba, generate_ws
from .seeding import derive_seed

__version__ = "0.1.0"

__all__ = [
    "AttackMode",
    "AttackStrategy",
    "BaParams",
    "CascadeResult",
    "EdgeListFormatError",
    "EdgeLoadState",
    "EdgeStatus",
    "ExperimentConfig",
    "GammaResult",
    "GraphInputError",
    "ModelError",
    "ModelParams",
    "Network",
    "RoundTrace",
    "SweepRecord",
    "ThresholdResult",
    "Topology",
    "TransferMode",
    "WsParams",
    "derive_seed",
    "dump_edge_list",
    "epsilon_grid",
    "find_epsilon_threshold",
    "gamma",
    "generate_ba",
    "generate_ws",
    "load_edge_list",
    "run_cascade",
    "run_sweep",
    "run_threshold_table",
    "select_attack_set",
]
