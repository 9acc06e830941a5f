"""Exact A(∞) transfer, bar constructions, Massey products and twisting cochains."""

from ._ainf import (
    AinfError,
    Model,
    Report,
    Transfer,
    command_names,
    corpus,
    run,
    tilde_b_betti,
    transfer,
)

__all__ = [
    "AinfError",
    "Model",
    "Report",
    "Transfer",
    "command_names",
    "corpus",
    "run",
    "tilde_b_betti",
    "transfer",
]
