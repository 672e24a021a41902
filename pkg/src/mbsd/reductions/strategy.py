"""Executable MBSD strategies: lifting, closed-loop simulation and verification.

A strategy stores only its positional core: for every P2 node of the arena
it came from, the D_B state to move to.  At run time the annotation of the
current node (memory bits or progression state) is recomputed from the
observed history, so strategy files never contain histories.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .. import ltlf
from ..automata import Progressor
from ..games import PositionalStrategy
from ..mapping import GENERAL, POINTWISE, TARGET
from .build import ReducedGame
from .instance import STOP_A, STOP_B, MbsdInstance

TREE = "tree"
STRATEGY_KINDS = (POINTWISE, TARGET, TREE, GENERAL)


class StrategyError(ValueError):
    pass


class SimulationError(ValueError):
    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(f"step {step}: {message}")


class VerificationBudgetExceeded(RuntimeError):
    pass


def _bits(c: int, d: int, k: int) -> str:
    return "".join(f"{(c >> i) & 1}{(d >> i) & 1}" for i in range(k))


@dataclass
class MbsdStrategy:
    kind: str
    moves: dict[str, str]
    stop_on_goal: bool
    k: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise StrategyError(f"unknown strategy kind {self.kind!r}")

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "moves": dict(sorted(self.moves.items())),
               "stop_on_goal": self.stop_on_goal}
        if self.k is not None:
            doc["k"] = self.k
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict) -> MbsdStrategy:
        try:
            moves = doc["moves"]
            if not isinstance(moves, dict):
                raise StrategyError("'moves' must be an object")
            return cls(doc["kind"], {str(a): str(b) for a, b in moves.items()},
                       bool(doc["stop_on_goal"]), doc.get("k"))
        except (KeyError, TypeError) as exc:
            raise StrategyError(f"malformed strategy document: {exc!r}") from exc

    def executor(self, p: MbsdInstance) -> Executor:
        return Executor(p, self)

    def induced_trace(self, p: MbsdInstance, history: Sequence[int]) -> list[int]:
        """B states chosen along a D_A history that starts at the initial state."""
        if not history or history[0] != p.domain_a.init:
            raise StrategyError("history must start at the initial state of D_A")
        ex = self.executor(p)
        st = ex.start()
        out = [st.t]
        for i, s in enumerate(history[1:], start=1):
            if s not in p.domain_a.succ[st.s]:
                raise StrategyError(f"history is not a D_A trace at position {i}")
            st = ex.step(st, s)
            out.append(st.t)
        return out

    def respond(self, p: MbsdInstance, history: Sequence[int]) -> int:
        return self.induced_trace(p, history)[-1]


@dataclass(frozen=True)
class RunState:
    s: int
    t: int
    mem: tuple


class Executor:
    """Runs a strategy on one instance, tracking the annotation it is keyed by."""

    def __init__(self, p: MbsdInstance, strategy: MbsdStrategy):
        self.p = p
        self.strategy = strategy
        kind = strategy.kind
        if kind == POINTWISE and p.kind != POINTWISE:
            raise StrategyError("point-wise strategy on a non point-wise instance")
        if kind in (TARGET, TREE) and p.kind != TARGET:
            raise StrategyError(f"{kind} strategy on a non-target instance")
        self.ids_a = p.domain_a.ids
        self.ids_b = p.domain_b.ids
        self.index_b = {x: i for i, x in enumerate(self.ids_b)}
        self.prog = None
        if kind == GENERAL:
            self.prog = Progressor(p.formula)
        elif kind == POINTWISE:
            self._inv = p.mapping.invariant()
        else:
            self.cmask, self.dmask = p.masks()
            self.k = p.mapping.k

    def start(self) -> RunState:
        p = self.p
        s, t = p.domain_a.init, p.domain_b.init
        return RunState(s, t, self._mem0(s, t))

    def _mem0(self, s, t) -> tuple:
        if self.prog is not None:
            return (self.prog.step(0, self.p.joint_label(s, t)),)
        if self.strategy.kind == POINTWISE:
            return ()
        return (self.cmask[s], self.dmask[t])

    def key(self, s_next: int, t: int, mem: tuple) -> str:
        base = f"{self.ids_a[s_next]}|{self.ids_b[t]}"
        kind = self.strategy.kind
        if kind == TARGET:
            c, d = mem
            return f"{base}|{_bits(c | self.cmask[s_next], d, self.k)}"
        if kind == GENERAL:
            return f"{base}|{self.prog.label(mem[0])}"
        return base

    def choose(self, st: RunState, s_next: int) -> int:
        succ = self.p.domain_b.succ[st.t]
        name = self.strategy.moves.get(self.key(s_next, st.t, st.mem))
        if name is None:
            return succ[0]
        t2 = self.index_b.get(name)
        if t2 is None or t2 not in succ:
            raise StrategyError(f"prescribed move to {name!r} is not a successor of {self.ids_b[st.t]!r}")
        return t2

    def step(self, st: RunState, s_next: int) -> RunState:
        t2 = self.choose(st, s_next)
        kind = self.strategy.kind
        if kind == GENERAL:
            mem = (self.prog.step(st.mem[0], self.p.joint_label(s_next, t2)),)
        elif kind == POINTWISE:
            mem = ()
        else:
            c, d = st.mem
            mem = (c | self.cmask[s_next], d | self.dmask[t2])
        return RunState(s_next, t2, mem)

    def is_goal(self, st: RunState) -> bool:
        kind = self.strategy.kind
        if kind == GENERAL:
            return self.prog.accepting(st.mem[0])
        if kind == POINTWISE:
            return ltlf.eval_assignment(self._inv, self.p.joint_label(st.s, st.t))
        c, d = st.mem
        return c & ~d == 0

    def stops(self, st: RunState) -> bool:
        return self.strategy.stop_on_goal and self.is_goal(st)


def lift_strategy(p: MbsdInstance, game: ReducedGame, strategy: PositionalStrategy) -> MbsdStrategy:
    """Translate a P2 strategy of a reduced game into an executable MBSD strategy."""
    ids_a, ids_b = p.domain_a.ids, p.domain_b.ids
    moves = {}
    for v, u in sorted(strategy.moves.items()):
        vk, uk = game.v_keys[v], game.u_keys[u]
        base = f"{ids_a[vk[0]]}|{ids_b[vk[1]]}"
        if game.mode == TARGET:
            base += "|" + _bits(vk[2], vk[3], p.mapping.k)
        elif game.mode == GENERAL:
            base += "|" + game.progressor.label(vk[2])
        moves[base] = ids_b[uk[1]]
    k = p.mapping.k if p.kind != GENERAL else None
    return MbsdStrategy(game.mode, moves, p.stop_agent == STOP_B, k)


# --------------------------------------------------------------------------
# closed-loop runs

@dataclass
class SimulationResult:
    states_a: list[int]
    states_b: list[int]
    word: list[frozenset[str]] = field(repr=False)
    verdict: bool
    stopped_by: str

    def to_json(self, p: MbsdInstance) -> dict:
        return {
            "trace_a": [p.domain_a.ids[s] for s in self.states_a],
            "trace_b": [p.domain_b.ids[t] for t in self.states_b],
            "verdict": self.verdict,
            "stopped_by": self.stopped_by,
        }


def simulate(p: MbsdInstance, strategy: MbsdStrategy, adversary: Sequence[int] | int,
             max_steps: int = 30) -> SimulationResult:
    """Play the strategy against an adversary controlling D_A.

    ``adversary`` is either a script of D_A state indices to move to, in
    order, or an integer seed for a random adversary.  When A is the stop
    agent the script's end (or the seeded adversary's random choice, at most
    ``max_steps``) stops the run; when B stops, the run ends on the first goal
    node, on script exhaustion, or after ``max_steps`` moves.
    """
    ex = strategy.executor(p)
    da = p.domain_a
    st = ex.start()
    sa, sb = [st.s], [st.t]
    if isinstance(adversary, int) and not isinstance(adversary, bool):
        rng = random.Random(adversary)
        stop_at = rng.randint(0, max_steps) if p.stop_agent == STOP_A else max_steps
        script = None
    else:
        rng = None
        script = list(adversary)
        stop_at = min(len(script), max_steps)
    stopped_by = "horizon"
    step = 0
    while True:
        if p.stop_agent == STOP_B and ex.stops(st):
            stopped_by = "B"
            break
        if step >= stop_at:
            stopped_by = "A" if p.stop_agent == STOP_A else ("script" if script is not None else "horizon")
            break
        if script is not None:
            s_next = script[step]
            if not (isinstance(s_next, int) and 0 <= s_next < da.n_states) or s_next not in da.succ[st.s]:
                raise SimulationError(f"illegal move of D_A to {s_next!r}", step + 1)
        else:
            s_next = rng.choice(da.succ[st.s])
        st = ex.step(st, s_next)
        sa.append(st.s)
        sb.append(st.t)
        step += 1
    word = p.joint_word(sa, sb)
    return SimulationResult(sa, sb, word, ltlf.eval_trace(p.formula, word), stopped_by)


def verify_mbsd(p: MbsdInstance, strategy: MbsdStrategy, budget: int = 10 ** 6) -> bool:
    """Exhaustively check a strategy against every behaviour of D_A.

    The product of both domains, the strategy's own memory and a separate
    progression monitor of the mapping formula is explored.  With stop
    agent A every reachable node must satisfy the formula; with stop agent B
    the strategy must stop on every branch and the formula must hold where
    it stops.
    """
    ex = strategy.executor(p)
    monitor = Progressor(p.formula)
    da = p.domain_a
    st0 = ex.start()
    r0 = monitor.step(0, p.joint_label(st0.s, st0.t))
    start = (st0, r0)

    def successors(node):
        st, r = node
        out = []
        for s2 in da.succ[st.s]:
            nst = ex.step(st, s2)
            out.append((nst, monitor.step(r, p.joint_label(nst.s, nst.t))))
        return out

    if p.stop_agent == STOP_A:
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            if not monitor.accepting(node[1]):
                return False
            for nxt in successors(node):
                if nxt not in seen:
                    if len(seen) >= budget:
                        raise VerificationBudgetExceeded(f"more than {budget} product nodes")
                    seen.add(nxt)
                    stack.append(nxt)
        return True

    # stop agent B: depth-first search for a non-stopping cycle
    GREY, BLACK = 1, 2
    colour = {}

    def terminal(node) -> bool | None:
        if ex.stops(node[0]):
            return monitor.accepting(node[1])
        return None

    t0 = terminal(start)
    if t0 is not None:
        return t0
    colour[start] = GREY
    stack2 = [(start, iter(successors(start)))]
    while stack2:
        node, it = stack2[-1]
        nxt = next(it, None)
        if nxt is None:
            colour[node] = BLACK
            stack2.pop()
            continue
        c = colour.get(nxt)
        if c == GREY:
            return False
        if c == BLACK:
            continue
        verdict = terminal(nxt)
        if verdict is False:
            return False
        if verdict is True:
            colour[nxt] = BLACK
            continue
        if len(colour) >= budget:
            raise VerificationBudgetExceeded(f"more than {budget} product nodes")
        colour[nxt] = GREY
        stack2.append((nxt, iter(successors(nxt))))
    return True
