"""Arena constructions for the three mapping classes plus the tree-like fast path.

Every builder returns a :class:`ReducedGame`: the bipartite arena, the goal
set of P1 nodes, the objective kind, and the node keys needed to translate
game strategies back into domain moves.  Node keys are

* ``(s, t)`` for the point-wise and tree arenas,
* ``(s, t, c, d)`` for the target arena, ``c``/``d`` being k-bit masks,
* ``(s, t, q)`` for the general arena, ``q`` a progression state id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .. import automata, domains, ltlf
from ..automata import Progressor
from ..games import REACH, SAFE, GameArena, WinningObjective
from ..ltlf import Formula
from ..mapping import GENERAL, POINTWISE, TARGET
from .instance import STOP_A, InstanceError, MbsdInstance

DEFAULT_K_CAP = 12


class TargetCapError(ValueError):
    """Refusal to build a memory-bit arena whose size estimate is too large."""

    def __init__(self, k: int, cap: int, estimate: int):
        self.k, self.cap, self.estimate = k, cap, estimate
        super().__init__(f"target mapping has k={k} conjuncts, above the cap {cap}; "
                         f"the memory-bit arena may reach {estimate} nodes")


class NotTreeLikeError(ValueError):
    pass


@dataclass
class ReducedGame:
    mode: str
    arena: GameArena
    goal: frozenset[int]
    objective: str
    u_keys: list[Hashable]
    v_keys: list[Hashable]
    u_index: dict = field(repr=False)
    v_index: dict = field(repr=False)
    progressor: Progressor | None = field(default=None, repr=False)

    @property
    def winning_objective(self) -> WinningObjective:
        return WinningObjective(self.objective, self.goal)

    @property
    def n_nodes(self) -> int:
        return self.arena.n_u + self.arena.n_v

    @property
    def n_edges(self) -> int:
        return self.arena.n_edges


def _explore(u0: Hashable, u_moves: Callable, v_moves: Callable):
    """Breadth-first materialization of the part reachable from ``u0``."""
    u_keys, v_keys = [u0], []
    u_index, v_index = {u0: 0}, {}
    p1: list[list[int]] = []
    p2: list[list[int]] = []
    queue = deque([("u", u0)])
    while queue:
        side, key = queue.popleft()
        if side == "u":
            out = []
            for nk in u_moves(key):
                j = v_index.get(nk)
                if j is None:
                    j = v_index[nk] = len(v_keys)
                    v_keys.append(nk)
                    queue.append(("v", nk))
                out.append(j)
            p1.append(out)
        else:
            out = []
            for nk in v_moves(key):
                j = u_index.get(nk)
                if j is None:
                    j = u_index[nk] = len(u_keys)
                    u_keys.append(nk)
                    queue.append(("u", nk))
                out.append(j)
            p2.append(out)
    # nodes of each side leave the FIFO queue in numbering order, so p1[i] and
    # p2[j] belong to node i and node j
    arena = GameArena(tuple(tuple(sorted(set(x))) for x in p1),
                      tuple(tuple(sorted(set(x))) for x in p2), 0)
    return arena, u_keys, v_keys, u_index, v_index


def _require(p: MbsdInstance, kind: str) -> None:
    if p.kind != kind:
        raise InstanceError(f"expected a {kind} mapping, got {p.kind}")


def build_pointwise_game(p: MbsdInstance) -> ReducedGame:
    """Safety game on the full product S x T (both player copies)."""
    _require(p, POINTWISE)
    da, db = p.domain_a, p.domain_b
    nt = db.n_states
    keys = [(s, t) for s in range(da.n_states) for t in range(nt)]
    p1 = tuple(tuple(s2 * nt + t for s2 in da.succ[s]) for s, t in keys)
    p2 = tuple(tuple(s * nt + t2 for t2 in db.succ[t]) for s, t in keys)
    inv = p.mapping.invariant()
    goal = frozenset(i for i, (s, t) in enumerate(keys)
                     if ltlf.eval_assignment(inv, p.joint_label(s, t)))
    arena = GameArena(p1, p2, da.init * nt + db.init)
    index = {k: i for i, k in enumerate(keys)}
    assert arena.n_u + arena.n_v == 2 * da.n_states * nt
    return ReducedGame(POINTWISE, arena, goal, SAFE, keys, list(keys), index, dict(index))


def build_target_game(p: MbsdInstance, k_cap: int = DEFAULT_K_CAP) -> ReducedGame:
    """Reachability game on S x T x M with k pairs of memory bits."""
    _require(p, TARGET)
    da, db = p.domain_a, p.domain_b
    k = p.mapping.k
    bound = 2 * da.n_states * db.n_states * 4 ** k
    if k > k_cap:
        raise TargetCapError(k, k_cap, bound)
    cmask, dmask = p.masks()

    def u_moves(key):
        s, t, c, d = key
        return [(s2, t, c | cmask[s2], d) for s2 in da.succ[s]]

    def v_moves(key):
        s, t, c, d = key
        return [(s, t2, c, d | dmask[t2]) for t2 in db.succ[t]]

    u0 = (da.init, db.init, cmask[da.init], dmask[db.init])
    arena, uk, vk, ui, vi = _explore(u0, u_moves, v_moves)
    assert arena.n_u + arena.n_v <= bound, "target arena exceeds its size bound"
    goal = frozenset(i for i, (_, _, c, d) in enumerate(uk) if c & ~d == 0)
    return ReducedGame(TARGET, arena, goal, REACH, uk, vk, ui, vi)


def ancestor_masks(d: domains.DynamicDomain, mask: list[int]) -> list[int]:
    """OR of ``mask`` along the unique root path to every state of a tree-like domain."""
    out = [0] * d.n_states
    out[d.init] = mask[d.init]
    queue = deque([d.init])
    while queue:
        s = queue.popleft()
        for x in d.succ[s]:
            if x != s:
                out[x] = out[s] | mask[x]
                queue.append(x)
    return out


def build_tree_game(p: MbsdInstance) -> ReducedGame:
    """Plain S x T reachability game for tree-like domains (no memory bits).

    A node is accepting for conjunct i when its unique play either never
    witnessed phi_i or has also witnessed psi_i.
    """
    _require(p, TARGET)
    da, db = p.domain_a, p.domain_b
    if not (domains.is_tree_like(da) and domains.is_tree_like(db)):
        raise NotTreeLikeError("both domains must be tree-like; use the target reduction instead")
    cmask, dmask = p.masks()
    seen_a = ancestor_masks(da, cmask)
    seen_b = ancestor_masks(db, dmask)

    def u_moves(key):
        s, t = key
        return [(s2, t) for s2 in da.succ[s]]

    def v_moves(key):
        s, t = key
        return [(s, t2) for t2 in db.succ[t]]

    arena, uk, vk, ui, vi = _explore((da.init, db.init), u_moves, v_moves)
    goal = frozenset(i for i, (s, t) in enumerate(uk) if seen_a[s] & ~seen_b[t] == 0)
    return ReducedGame("tree", arena, goal, REACH, uk, vk, ui, vi)


def build_general_game(p: MbsdInstance, formula: Formula | None = None,
                       max_states: int = automata.DEFAULT_STATE_CEILING) -> ReducedGame:
    """Product of both domains with the lazily progressed automaton of the mapping.

    Instances of any kind are accepted; their mapping is rewritten as one
    formula.  The objective is safety when A stops and reachability when B
    stops.
    """
    phi = p.formula if formula is None else formula
    prog = Progressor(phi, max_states)
    da, db = p.domain_a, p.domain_b

    def u_moves(key):
        s, t, q = key
        return [(s2, t, q) for s2 in da.succ[s]]

    def v_moves(key):
        s, t, q = key
        return [(s, t2, prog.step(q, p.joint_label(s, t2))) for t2 in db.succ[t]]

    q0 = prog.step(0, p.joint_label(da.init, db.init))
    arena, uk, vk, ui, vi = _explore((da.init, db.init, q0), u_moves, v_moves)
    goal = frozenset(i for i, (_, _, q) in enumerate(uk) if prog.accepting(q))
    objective = SAFE if p.stop_agent == STOP_A else REACH
    return ReducedGame(GENERAL, arena, goal, objective, uk, vk, ui, vi, prog)
