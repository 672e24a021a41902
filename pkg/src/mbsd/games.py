"""Turn-based two-player games on bipartite arenas.

P1 owns the nodes ``U`` and moves first; P2 owns ``V``.  Both node sets are
dense integer ranges.  Objectives are safety and reachability over a goal set
of P1 nodes; the solvers compute attractors by counter-based backward search
and extract positional strategies for P2.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "GameArena", "ArenaError", "WinningObjective", "PositionalStrategy", "SAFE", "REACH",
    "attractor", "solve_safety", "solve_reachability", "solve", "verify_strategy",
    "random_arena", "to_dot",
]

SAFE = "safe"
REACH = "reach"


class ArenaError(ValueError):
    pass


@dataclass(frozen=True)
class GameArena:
    p1_succ: tuple[tuple[int, ...], ...]
    p2_succ: tuple[tuple[int, ...], ...]
    init: int = 0
    check_deadlocks: bool = True

    def __post_init__(self):
        nu, nv = len(self.p1_succ), len(self.p2_succ)
        if not 0 <= self.init < nu:
            raise ArenaError(f"initial node {self.init} is not a P1 node")
        for u, vs in enumerate(self.p1_succ):
            for v in vs:
                if not 0 <= v < nv:
                    raise ArenaError(f"P1 edge u{u} -> v{v} leaves the arena")
        for v, us in enumerate(self.p2_succ):
            for u in us:
                if not 0 <= u < nu:
                    raise ArenaError(f"P2 edge v{v} -> u{u} leaves the arena")
        if self.check_deadlocks:
            ru, rv = self.reachable()
            for u in ru:
                if not self.p1_succ[u]:
                    raise ArenaError(f"reachable P1 node u{u} has no move")
            for v in rv:
                if not self.p2_succ[v]:
                    raise ArenaError(f"reachable P2 node v{v} has no move")

    @classmethod
    def from_edges(cls, n_u: int, n_v: int, alpha: Iterable[tuple[int, int]],
                   beta: Iterable[tuple[int, int]], init: int = 0) -> GameArena:
        s1: list[set] = [set() for _ in range(n_u)]
        s2: list[set] = [set() for _ in range(n_v)]
        for u, v in alpha:
            s1[u].add(v)
        for v, u in beta:
            s2[v].add(u)
        return cls(tuple(tuple(sorted(x)) for x in s1), tuple(tuple(sorted(x)) for x in s2), init)

    @property
    def n_u(self) -> int:
        return len(self.p1_succ)

    @property
    def n_v(self) -> int:
        return len(self.p2_succ)

    @property
    def n_edges(self) -> int:
        return sum(map(len, self.p1_succ)) + sum(map(len, self.p2_succ))

    def predecessors(self) -> tuple[list[list[int]], list[list[int]]]:
        """``(p1_pred, p2_pred)``: for each V node its P1 predecessors, for each U node its P2 predecessors."""
        p1_pred: list[list[int]] = [[] for _ in range(self.n_v)]
        p2_pred: list[list[int]] = [[] for _ in range(self.n_u)]
        for u, vs in enumerate(self.p1_succ):
            for v in vs:
                p1_pred[v].append(u)
        for v, us in enumerate(self.p2_succ):
            for u in us:
                p2_pred[u].append(v)
        return p1_pred, p2_pred

    def reachable(self) -> tuple[set[int], set[int]]:
        ru, rv = {self.init}, set()
        queue = deque([self.init])
        while queue:
            u = queue.popleft()
            for v in self.p1_succ[u]:
                if v not in rv:
                    rv.add(v)
                    for w in self.p2_succ[v]:
                        if w not in ru:
                            ru.add(w)
                            queue.append(w)
        return ru, rv


@dataclass(frozen=True)
class WinningObjective:
    kind: str
    goal: frozenset[int]

    def __post_init__(self):
        if self.kind not in (SAFE, REACH):
            raise ValueError(f"unknown objective kind {self.kind!r}")


@dataclass
class PositionalStrategy:
    """P2 strategy: V node -> chosen U successor."""

    moves: dict[int, int] = field(default_factory=dict)


@dataclass
class Attractor:
    u_rank: list[int | None]
    v_rank: list[int | None]
    edge_visits: int

    def has_u(self, u: int) -> bool:
        return self.u_rank[u] is not None

    def has_v(self, v: int) -> bool:
        return self.v_rank[v] is not None


def _check_goal(a: GameArena, g: Iterable[int]) -> frozenset[int]:
    g = frozenset(g)
    bad = [x for x in g if not (isinstance(x, int) and 0 <= x < a.n_u)]
    if bad:
        raise ArenaError(f"goal set contains non-P1 nodes {sorted(bad, key=str)[:5]}")
    return g


def attractor(a: GameArena, target: Iterable[int], player: int) -> Attractor:
    """Nodes from which ``player`` (1 or 2) can force a visit to ``target`` (a set of U nodes).

    Ranks count moves to the target.  Every arena edge is looked at once
    through the predecessor lists; ``edge_visits`` reports the count.
    """
    if player not in (1, 2):
        raise ValueError("player must be 1 or 2")
    p1_pred, p2_pred = a.predecessors()
    u_rank: list[int | None] = [None] * a.n_u
    v_rank: list[int | None] = [None] * a.n_v
    # counters for nodes owned by the opponent: all successors must be attracted
    u_left = [len(x) for x in a.p1_succ]
    v_left = [len(x) for x in a.p2_succ]
    queue: deque[tuple[str, int]] = deque()
    for u in sorted(set(target)):
        u_rank[u] = 0
        queue.append(("u", u))
    visits = 0
    while queue:
        side, x = queue.popleft()
        if side == "u":
            r = u_rank[x]
            for v in p2_pred[x]:
                visits += 1
                if v_rank[v] is not None:
                    continue
                if player == 2:
                    v_rank[v] = r + 1
                    queue.append(("v", v))
                else:
                    v_left[v] -= 1
                    if v_left[v] == 0:
                        v_rank[v] = r + 1
                        queue.append(("v", v))
        else:
            r = v_rank[x]
            for u in p1_pred[x]:
                visits += 1
                if u_rank[u] is not None:
                    continue
                if player == 1:
                    u_rank[u] = r + 1
                    queue.append(("u", u))
                else:
                    u_left[u] -= 1
                    if u_left[u] == 0:
                        u_rank[u] = r + 1
                        queue.append(("u", u))
    return Attractor(u_rank, v_rank, visits)


def solve_safety(a: GameArena, g: Iterable[int]) -> PositionalStrategy | None:
    """P2 strategy keeping every visited P1 node inside ``g``, or None."""
    g = _check_goal(a, g)
    attr = attractor(a, [u for u in range(a.n_u) if u not in g], player=1)
    if attr.has_u(a.init):
        return None
    moves = {}
    for v in range(a.n_v):
        if attr.has_v(v):
            continue
        safe = [u for u in a.p2_succ[v] if not attr.has_u(u)]
        if safe:
            moves[v] = safe[0]
    return PositionalStrategy(moves)


def solve_reachability(a: GameArena, g: Iterable[int]) -> PositionalStrategy | None:
    """P2 strategy forcing a visit to ``g``, or None.

    Moves are kept only for P2 nodes reachable before the goal is hit, so an
    initial node already in ``g`` yields an empty map.
    """
    g = _check_goal(a, g)
    attr = attractor(a, g, player=2)
    if not attr.has_u(a.init):
        return None
    moves = {}
    seen = {a.init}
    queue = deque([a.init])
    while queue:
        u = queue.popleft()
        if u in g:
            continue
        for v in a.p1_succ[u]:
            if v in moves:
                continue
            rv = attr.v_rank[v]
            nxt = min(w for w in a.p2_succ[v]
                      if attr.u_rank[w] is not None and attr.u_rank[w] < rv)
            moves[v] = nxt
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return PositionalStrategy(moves)


def solve(a: GameArena, w: WinningObjective) -> PositionalStrategy | None:
    if w.kind == SAFE:
        return solve_safety(a, w.goal)
    return solve_reachability(a, w.goal)


def verify_strategy(a: GameArena, w: WinningObjective, s: PositionalStrategy) -> bool:
    """Check ``s`` against ``w`` on the arena restricted to the strategy's moves."""
    for v, u in s.moves.items():
        if not (0 <= v < a.n_v and 0 <= u < a.n_u):
            raise ArenaError(f"strategy move v{v} -> u{u} references unknown nodes")
    if any(u not in a.p2_succ[v] for v, u in s.moves.items()):
        return False
    goal = w.goal

    def succ_u(u):
        if w.kind == REACH and u in goal:
            return ()
        return a.p1_succ[u]

    # iterative DFS over U nodes (V nodes have one strategy successor)
    if w.kind == SAFE:
        seen = {a.init}
        stack = [a.init]
        while stack:
            u = stack.pop()
            if u not in goal or not a.p1_succ[u]:
                return False
            for v in a.p1_succ[u]:
                if v not in s.moves:
                    return False
                nxt = s.moves[v]
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return True
    # reach: no cycle avoiding g, and every maximal path ends in g
    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[int, int] = {}
    colour[a.init] = GREY
    stack2: list[tuple[int, Sequence[int], int]] = [(a.init, succ_u(a.init), 0)]
    if a.init not in goal and not a.p1_succ[a.init]:
        return False
    while stack2:
        u, vs, i = stack2.pop()
        if i == len(vs):
            colour[u] = BLACK
            continue
        stack2.append((u, vs, i + 1))
        v = vs[i]
        if v not in s.moves:
            return False
        nxt = s.moves[v]
        c = colour.get(nxt, WHITE)
        if c == GREY:
            return False
        if c == WHITE:
            if nxt not in goal and not a.p1_succ[nxt]:
                return False
            colour[nxt] = GREY
            stack2.append((nxt, succ_u(nxt), 0))
    return True


def random_arena(seed: int, n_nodes: int, max_out: int = 3,
                 goal_ratio: float = 0.5) -> tuple[GameArena, frozenset[int]]:
    """Random deadlock-free arena with about ``n_nodes`` nodes and a random goal set."""
    rng = random.Random(seed)
    n_u = max(1, n_nodes // 2)
    n_v = max(1, n_nodes - n_u)
    p1 = tuple(tuple(sorted(rng.sample(range(n_v), rng.randint(1, min(max_out, n_v)))))
               for _ in range(n_u))
    p2 = tuple(tuple(sorted(rng.sample(range(n_u), rng.randint(1, min(max_out, n_u)))))
               for _ in range(n_v))
    goal = frozenset(u for u in range(n_u) if rng.random() < goal_ratio)
    return GameArena(p1, p2, 0), goal


def to_dot(a: GameArena, goal: Iterable[int] = (), strategy: PositionalStrategy | None = None) -> str:
    goal = set(goal)
    lines = ["digraph arena {"]
    for u in range(a.n_u):
        fill = ", style=filled" if u in goal else ""
        lines.append(f"  u{u} [shape=box{fill}];")
    for v in range(a.n_v):
        lines.append(f"  v{v} [shape=circle];")
    for u, vs in enumerate(a.p1_succ):
        for v in vs:
            lines.append(f"  u{u} -> v{v};")
    for v, us in enumerate(a.p2_succ):
        for u in us:
            bold = " [style=bold]" if strategy and strategy.moves.get(v) == u else ""
            lines.append(f"  v{v} -> u{u}{bold};")
    lines.append("}")
    return "\n".join(lines) + "\n"
