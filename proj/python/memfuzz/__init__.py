"""Memristor simulation with closed-form and fuzzy-logic window functions."""

from ._core import (
    CircuitConfig,
    ConfigError,
    DeviceParams,
    FuzzySystem,
    RunSummary,
    Trace,
    Window,
    default_fuzzy_system,
    default_threshold_system,
    memristance,
    preset_json,
    preset_names,
    run_cli,
    simulate,
    state_derivative,
    step,
    sweep,
    window_surface,
    x_from_resistance,
)

__all__ = [
    "CircuitConfig",
    "ConfigError",
    "DeviceParams",
    "FuzzySystem",
    "RunSummary",
    "Trace",
    "Window",
    "default_fuzzy_system",
    "default_threshold_system",
    "memristance",
    "preset_json",
    "preset_names",
    "run_cli",
    "simulate",
    "state_derivative",
    "step",
    "sweep",
    "window_surface",
    "x_from_resistance",
]
