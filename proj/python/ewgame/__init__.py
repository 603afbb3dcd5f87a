"""Exponential-weights dynamics on 2x2 symmetric games."""

from ._ewgame import (  # noqa: F401
    Action,
    DegenerateGame,
    DynState,
    EwgameError,
    InvalidParameter,
    SymmetricGame,
    WrongRegime,
    bank_reduced_game,
    ce_membership,
    classify,
    construct_oscillation,
    ew_step,
    mixed_limit_ratio_bound,
    simulate,
    symmetric_mixed_equilibrium,
    two_flip_bound,
)

__all__ = [
    "Action",
    "DegenerateGame",
    "DynState",
    "EwgameError",
    "InvalidParameter",
    "SymmetricGame",
    "WrongRegime",
    "bank_reduced_game",
    "ce_membership",
    "classify",
    "construct_oscillation",
    "ew_step",
    "mixed_limit_ratio_bound",
    "simulate",
    "symmetric_mixed_equilibrium",
    "two_flip_bound",
]
