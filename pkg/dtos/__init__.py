"""Validated parameter, configuration and report schemas."""

from .params import (
    AbsorberParams,
    AugmentParams,
    RegularityParams,
    SphereParams,
    ThresholdParams,
    parse_rational,
)
from .report import ExperimentConfig, ReportRow

__all__ = [
    "AbsorberParams",
    "AugmentParams",
    "ExperimentConfig",
    "RegularityParams",
    "ReportRow",
    "SphereParams",
    "ThresholdParams",
    "parse_rational",
]
