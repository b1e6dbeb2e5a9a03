"""Flying-trot planner, controller and simulator."""

from ._core import (
    Error,
    GaitParams,
    InfeasibleError,
    InsufficientDataError,
    KeyframeOrderError,
    NumericalDivergence,
    ParseError,
    PhaseTimeline,
    Scenario,
    UnreachableError,
    ValidationError,
    ZKeyframes,
    config_keys,
    derive_timeline,
    fk_foot,
    ik_leg,
    load_config,
    metrics,
    parse_config,
    run_scenario,
    synth_z_keyframes,
    telemetry_columns,
    write_plan,
)

__version__ = "0.1.0"
