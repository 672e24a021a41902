"""Top-level synthesis entry point and random instance generation."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .. import domains, games, ltlf
from ..mapping import GENERAL, POINTWISE, TARGET, MappingSpec
from .build import (
    DEFAULT_K_CAP, NotTreeLikeError, ReducedGame, build_general_game,
    build_pointwise_game, build_target_game, build_tree_game,
)
from .instance import STOP_A, STOP_B, InstanceError, MbsdInstance
from .strategy import TREE, MbsdStrategy, lift_strategy

MODES = ("auto", POINTWISE, TARGET, TREE, GENERAL)


@dataclass
class SolveResult:
    realizable: bool
    strategy: MbsdStrategy | None
    stats: dict
    game: ReducedGame | None = field(default=None, repr=False)

    def to_json(self, with_time: bool = False) -> dict:
        doc = {"realizable": self.realizable, **{k: v for k, v in self.stats.items()
                                                 if k != "elapsed_ms"}}
        if with_time:
            doc["elapsed_ms"] = self.stats["elapsed_ms"]
        return doc


def pick_mode(p: MbsdInstance, mode: str = "auto") -> str:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    if mode == "auto":
        if p.kind == TARGET and domains.is_tree_like(p.domain_a) and domains.is_tree_like(p.domain_b):
            return TREE
        return p.kind
    if mode == POINTWISE and p.kind != POINTWISE:
        raise InstanceError("mode pointwise needs a point-wise mapping")
    if mode in (TARGET, TREE) and p.kind != TARGET:
        raise InstanceError(f"mode {mode} needs a target mapping")
    return mode


def build_game(p: MbsdInstance, mode: str, k_cap: int = DEFAULT_K_CAP) -> ReducedGame:
    if mode == POINTWISE:
        return build_pointwise_game(p)
    if mode == TARGET:
        return build_target_game(p, k_cap)
    if mode == TREE:
        return build_tree_game(p)
    return build_general_game(p)


def solve_mbsd(p: MbsdInstance, mode: str = "auto", k_cap: int = DEFAULT_K_CAP) -> SolveResult:
    """Decide realizability and, when realizable, return an executable strategy."""
    started = time.perf_counter()
    chosen = pick_mode(p, mode)
    game = build_game(p, chosen, k_cap)
    win = games.solve(game.arena, game.winning_objective)
    strategy = lift_strategy(p, game, win) if win is not None else None
    stats = {
        "mode": chosen,
        "arena_nodes": game.n_nodes,
        "arena_edges": game.n_edges,
        "dfa_states": len(game.progressor) if game.progressor is not None else 0,
        "elapsed_ms": round((time.perf_counter() - started) * 1000, 3),
    }
    return SolveResult(win is not None, strategy, stats, game)


def solve_tree_target(p: MbsdInstance) -> MbsdStrategy | None:
    """Fast path for target mappings over tree-like domains."""
    if not (domains.is_tree_like(p.domain_a) and domains.is_tree_like(p.domain_b)):
        raise NotTreeLikeError("both domains must be tree-like; use build_target_game instead")
    return solve_mbsd(p, TREE).strategy


def random_instance(
    seed: int,
    kind: str,
    states: tuple[int, int] = (4, 4),
    k: int = 2,
    props: int = 2,
    branching: int = 2,
    tree_like: bool = False,
    depth: int = 2,
    stop_agent: str | None = None,
) -> MbsdInstance:
    """Random instance with A propositions ``a0..`` and B propositions ``b0..``.

    ``states`` are upper bounds; the actual sizes are drawn from the seed.
    General instances get a random temporal formula of nesting ``depth`` and
    a random stop agent unless one is given.
    """
    rng = random.Random(seed)
    na = rng.randint(1, states[0])
    nb = rng.randint(1, states[1])
    da = domains.gen_random(na, branching, props, tree_like, rng.randrange(2 ** 31), "a")
    db = domains.gen_random(nb, branching, props, tree_like, rng.randrange(2 ** 31), "b")
    pa = sorted(da.props)
    pb = sorted(db.props)
    if kind == GENERAL:
        formula = ltlf.random_formula(rng, depth, pa + pb)
        mapping = MappingSpec.general(formula)
        stop = stop_agent or rng.choice((STOP_A, STOP_B))
    else:
        pairs = [(ltlf.random_formula(rng, depth, pa, temporal=False),
                  ltlf.random_formula(rng, depth, pb, temporal=False)) for _ in range(k)]
        mapping = MappingSpec(kind, tuple(pairs))
        stop = STOP_A if kind == POINTWISE else STOP_B
    return MbsdInstance(da, db, mapping, stop)
