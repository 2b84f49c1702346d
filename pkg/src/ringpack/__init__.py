"""ringpack: exact minimum-rectangle packing of recursively nested rings."""

from ringpack.model import (
    Instance,
    RingType,
    PlacedRing,
    PlacedSolution,
    ValidationReport,
    generate_instance,
    parse_instance,
    validate_solution,
    volume_lower_bound,
    write_instance,
)
from ringpack.patterns import CircularPattern, RectangularPattern, enumerate_patterns
from ringpack.solver import DESK_CONFIG, SolveConfig, SolveReport, solve

__all__ = [
    "Instance",
    "RingType",
    "PlacedRing",
    "PlacedSolution",
    "ValidationReport",
    "CircularPattern",
    "RectangularPattern",
    "SolveConfig",
    "SolveReport",
    "DESK_CONFIG",
    "enumerate_patterns",
    "generate_instance",
    "parse_instance",
    "solve",
    "validate_solution",
    "volume_lower_bound",
    "write_instance",
]

__version__ = "0.1.0"
