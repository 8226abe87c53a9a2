"""Bremmer-series one-way wave modelling in stratified acoustic media."""

from .analysis import QCurve, Seismogram, amplitude_vs_offset, q_metric, read_section, write_section
from .model import (
    ConfigError,
    Grid,
    RunConfig,
    RunPlan,
    ShotGeometry,
    VelocityModel,
    evaluate_speed,
    load_config,
    loads_config,
    validate,
)

__all__ = [
    "ConfigError", "Grid", "QCurve", "RunConfig", "RunPlan", "Seismogram", "ShotGeometry", "VelocityModel",
    "amplitude_vs_offset", "evaluate_speed", "load_config", "loads_config", "q_metric", "read_section",
    "validate", "write_section",
]

__version__ = "0.1.0"
