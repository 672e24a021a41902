"""Reductions from MBSD instances to two-player games, and the strategies they yield."""

from .build import (
    DEFAULT_K_CAP, NotTreeLikeError, ReducedGame, TargetCapError, ancestor_masks,
    build_general_game, build_pointwise_game, build_target_game, build_tree_game,
)
from .instance import (
    STOP_A, STOP_B, InstanceError, MbsdInstance, dumps_instance, load_instance,
)
from .solve import MODES, SolveResult, pick_mode, random_instance, solve_mbsd, solve_tree_target
from .strategy import (
    TREE, Executor, MbsdStrategy, SimulationError, SimulationResult, StrategyError,
    VerificationBudgetExceeded, lift_strategy, simulate, verify_mbsd,
)

__all__ = [
    "DEFAULT_K_CAP", "NotTreeLikeError", "ReducedGame", "TargetCapError", "ancestor_masks",
    "build_general_game", "build_pointwise_game", "build_target_game", "build_tree_game",
    "STOP_A", "STOP_B", "InstanceError", "MbsdInstance", "dumps_instance", "load_instance",
    "MODES", "SolveResult", "pick_mode", "random_instance", "solve_mbsd", "solve_tree_target",
    "TREE", "Executor", "MbsdStrategy", "SimulationError", "SimulationResult", "StrategyError",
    "VerificationBudgetExceeded", "lift_strategy", "simulate", "verify_mbsd",
]
