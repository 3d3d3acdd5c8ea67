"""Tokenisation hardness toolkit: encoders, reductions, witnesses and exact oracles."""

from .core import (
    AddChainInstance,
    Alphabet,
    BudgetExceeded,
    Dataset,
    GapInstance,
    Max2SatInstance,
    SearchBudget,
    TokenisationInstance,
    UnaryCertificate,
    ValidationError,
    VcInstance,
    Vocabulary,
    approximation_ratio,
    concat,
    objective_length,
    objective_reduce,
)

__all__ = [
    "AddChainInstance",
    "Alphabet",
    "BudgetExceeded",
    "Dataset",
    "GapInstance",
    "Max2SatInstance",
    "SearchBudget",
    "TokenisationInstance",
    "UnaryCertificate",
    "ValidationError",
    "VcInstance",
    "Vocabulary",
    "approximation_ratio",
    "concat",
    "objective_length",
    "objective_reduce",
]

__version__ = "0.1.0"
