"""Seed-reproducible kinetic Monte Carlo simulation of customer
activity on a digital finance platform, with per-agent feature
extraction for anomaly-detection experiments."""

from .agents import (
    Agent,
    ArchetypeSpec,
    BadActorOverrides,
    NormalSpec,
    World,
    build_world,
    sample_agent,
)
from .config import (
    ConfigError,
    SimulationConfig,
    baseline_scenario,
    parse_config,
    serialize_config,
    validate_config,
)
from .engine import (
    Clock,
    NoEnabledEventsError,
    RateTable,
    RunResult,
    SimEvent,
    advance_clock,
    run,
    select_event,
    step,
)
from .features import extract_features, label_table, time_diff_stats
from .logio import LogRecord, read_log, token_for, write_log

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "ArchetypeSpec",
    "BadActorOverrides",
    "Clock",
    "ConfigError",
    "LogRecord",
    "NoEnabledEventsError",
    "NormalSpec",
    "RateTable",
    "RunResult",
    "SimEvent",
    "SimulationConfig",
    "World",
    "advance_clock",
    "baseline_scenario",
    "build_world",
    "extract_features",
    "label_table",
    "parse_config",
    "read_log",
    "run",
    "sample_agent",
    "select_event",
    "serialize_config",
    "step",
    "time_diff_stats",
    "token_for",
    "validate_config",
    "write_log",
]
