"""TSN schedule synthesis and packet delay correction simulator."""

from ._core import (
    Error,
    ParseError,
    ScheduleInfeasible,
    ValidationError,
    parse_duration,
    run,
    scenario_info,
    schedule,
    sweep,
    synth_histogram,
    verify,
)

__all__ = [
    "Error",
    "ParseError",
    "ScheduleInfeasible",
    "ValidationError",
    "parse_duration",
    "run",
    "scenario_info",
    "schedule",
    "sweep",
    "synth_histogram",
    "verify",
]
