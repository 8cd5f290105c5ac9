"""Allocation of indivisible items to agents with DAG-shaped preferences."""

from .core import (
    Allocation,
    DissatisfactionProfile,
    Error,
    Instance,
    NormalizationWarning,
    ParseError,
    PreconditionError,
    PreferenceGraph,
    SizeGuardError,
    ValidationError,
    dissatisfaction,
    parse_allocation,
    parse_instance,
    profile,
    satisfaction,
    serialize_allocation,
    serialize_instance,
    serialize_profile,
    validate_allocation,
)

__all__ = [
    "Allocation",
    "DissatisfactionProfile",
    "Error",
    "Instance",
    "NormalizationWarning",
    "ParseError",
    "PreconditionError",
    "PreferenceGraph",
    "SizeGuardError",
    "ValidationError",
    "dissatisfaction",
    "parse_allocation",
    "parse_instance",
    "profile",
    "satisfaction",
    "serialize_allocation",
    "serialize_instance",
    "serialize_profile",
    "validate_allocation",
]

__version__ = "0.1.0"
