"""Granular association rules and cold-start recommendation."""

from ._grale import (
    ContractViolation,
    Error,
    IngestError,
    Mmer,
    RuleFileError,
    RuleSet,
    SchemaError,
    enumerate_granules,
    evaluate,
    load_generic,
    load_movielens,
    load_rules,
    mine,
    recommend,
    sweep,
)

__all__ = [
    "ContractViolation",
    "Error",
    "IngestError",
    "Mmer",
    "RuleFileError",
    "RuleSet",
    "SchemaError",
    "enumerate_granules",
    "evaluate",
    "load_generic",
    "load_movielens",
    "load_rules",
    "mine",
    "recommend",
    "sweep",
]
