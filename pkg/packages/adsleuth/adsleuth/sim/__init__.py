"""App simulation: synthetic models, exploration and fault injection."""

from .explorer import ExplorationConfig, Explorer, Strategy, ad_state_coverage, explore
from .faults import FaultConfig, inject_faults
from .generator import exploration_suite, generate_benchmark
from .model import AppModel, dump_model, load_model, write_benchmark

__all__ = [
    "AppModel",
    "ExplorationConfig",
    "Explorer",
    "FaultConfig",
    "Strategy",
    "ad_state_coverage",
    "dump_model",
    "exploration_suite",
    "explore",
    "generate_benchmark",
    "inject_faults",
    "load_model",
    "write_benchmark",
]
