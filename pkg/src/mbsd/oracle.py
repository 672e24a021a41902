"""Deliberately naive deciders used to cross-check the solvers.

Nothing here imports the arena builders or the automaton code: games are
decided by bounded min-max search, and MBSD instances by searching joint
histories directly, with the mapping checked by ``ltlf.eval_trace`` on every
candidate prefix.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from . import ltlf
from .domains import DynamicDomain
from .games import SAFE, GameArena, WinningObjective
from .ltlf import (
    FALSE, TRUE, And, Atom, Eventually, FalseF, Formula, Globally, Iff, Implies, Next,
    Not, Or, Release, TrueF, Until, WeakNext,
)
from .mapping import GENERAL, POINTWISE, MappingSpec

DEFAULT_NODE_CAP = 2_000_000


class OracleCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleVerdict:
    winner: str          # "P1" or "P2"
    depth_used: int
    nodes_expanded: int
    bounded: bool = False


def minmax_decide(a: GameArena, w: WinningObjective, depth_bound: int) -> OracleVerdict:
    """Alternating search up to ``depth_bound`` moves.

    Safety: P1 wins iff it can force a P1 node outside the goal within the
    bound.  Reachability: P2 wins iff it can force a goal node within the
    bound.  Values depend only on (node, moves left), so they are memoized on
    that pair.  ``depth_used`` is the forcing distance when the forcing side
    wins and the whole bound otherwise.  Bounds below ``2 * |U + V|`` are
    flagged as possibly inexact.
    """
    if depth_bound < 1:
        raise ValueError("depth bound must be >= 1")
    if w.kind == SAFE:
        forcer, target = 1, frozenset(range(a.n_u)) - w.goal
    else:
        forcer, target = 2, w.goal
    memo: dict[tuple[str, int, int], int | None] = {}
    expanded = 0

    def force(side: str, x: int, rem: int) -> int | None:
        nonlocal expanded
        if side == "u" and x in target:
            return 0
        if rem == 0:
            return None
        key = (side, x, rem)
        if key in memo:
            return memo[key]
        expanded += 1
        owner = 1 if side == "u" else 2
        nxt_side = "v" if side == "u" else "u"
        succ = a.p1_succ[x] if side == "u" else a.p2_succ[x]
        dists = [force(nxt_side, y, rem - 1) for y in succ]
        if owner == forcer:
            ok = [d for d in dists if d is not None]
            res = 1 + min(ok) if ok else None
        else:
            res = None if (not dists or any(d is None for d in dists)) else 1 + max(dists)
        memo[key] = res
        return res

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * depth_bound + 100))
    try:
        d = force("u", a.init, depth_bound)
    finally:
        sys.setrecursionlimit(limit)
    bounded = depth_bound < 2 * (a.n_u + a.n_v)
    if d is not None:
        winner = "P1" if forcer == 1 else "P2"
        return OracleVerdict(winner, d, expanded, bounded)
    winner = "P2" if forcer == 1 else "P1"
    return OracleVerdict(winner, depth_bound, expanded, bounded)


# --------------------------------------------------------------------------
# direct search over joint histories

def _simp_not(f: Formula) -> Formula:
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def _flat(cls, f: Formula, out: list) -> None:
    if isinstance(f, cls):
        _flat(cls, f.left, out)
        _flat(cls, f.right, out)
    else:
        out.append(f)


def _simp_nary(cls, items: list[Formula]) -> Formula:
    unit, zero = (TRUE, FALSE) if cls is And else (FALSE, TRUE)
    parts: list[Formula] = []
    for x in items:
        _flat(cls, x, parts)
    keep = {}
    for x in parts:
        if x == zero:
            return zero
        if x != unit:
            keep[ltlf.to_str(x)] = x
    if not keep:
        return unit
    ordered = [keep[k] for k in sorted(keep)]
    out = ordered[0]
    for x in ordered[1:]:
        out = cls(out, x)
    return out


def _step(f: Formula, letter: frozenset) -> Formula:
    """Obligation on any nonempty remainder ``u`` such that ``letter . u |= f`` iff ``u |= result``."""
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return TRUE if f.name in letter else FALSE
    if isinstance(f, Not):
        return _simp_not(_step(f.arg, letter))
    if isinstance(f, And):
        return _simp_nary(And, [_step(f.left, letter), _step(f.right, letter)])
    if isinstance(f, Or):
        return _simp_nary(Or, [_step(f.left, letter), _step(f.right, letter)])
    if isinstance(f, Implies):
        return _simp_nary(Or, [_simp_not(_step(f.left, letter)), _step(f.right, letter)])
    if isinstance(f, Iff):
        a, b = _step(f.left, letter), _step(f.right, letter)
        return _simp_nary(Or, [_simp_nary(And, [a, b]),
                               _simp_nary(And, [_simp_not(a), _simp_not(b)])])
    if isinstance(f, (Next, WeakNext)):
        return f.arg
    if isinstance(f, Eventually):
        return _simp_nary(Or, [_step(f.arg, letter), f])
    if isinstance(f, Globally):
        return _simp_nary(And, [_step(f.arg, letter), f])
    if isinstance(f, Until):
        return _simp_nary(Or, [_step(f.right, letter),
                               _simp_nary(And, [_step(f.left, letter), f])])
    if isinstance(f, Release):
        return _simp_nary(And, [_step(f.right, letter),
                                _simp_nary(Or, [_step(f.left, letter), f])])
    raise TypeError(f"not a formula: {f!r}")


def _default_horizon(p, dfa_states: int | None) -> int:
    size = p.domain_a.n_states * p.domain_b.n_states
    kind = p.mapping.kind
    if kind == POINTWISE:
        return 2 * size
    if kind == GENERAL:
        if dfa_states is None:
            raise ValueError("general mappings need an explicit horizon or dfa_states")
        return 2 * size * dfa_states
    return 2 * size * 2 * p.mapping.k


def oracle_mbsd(p, horizon: int | None = None, dfa_states: int | None = None,
                node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """Decide an MBSD instance by searching joint histories.

    ``p`` is any object with ``domain_a``, ``domain_b``, ``mapping`` and
    ``stop_agent`` attributes.  ``horizon`` counts moves (one round is a D_A
    move followed by a D_B move).  With stop agent A, B wins iff it can keep
    the mapping true on every prefix for ``horizon // 2`` rounds; with stop
    agent B, B wins iff it can reach a prefix satisfying the mapping within
    that many rounds.  Histories are merged when they share the current
    states and the same remaining obligation, which is exact because every
    future verdict depends only on that obligation.
    """
    da: DynamicDomain = p.domain_a
    db: DynamicDomain = p.domain_b
    mapping: MappingSpec = p.mapping
    phi = mapping.as_ltlf()
    if horizon is None:
        horizon = _default_horizon(p, dfa_states)
    rounds = horizon // 2
    stop_a = p.stop_agent == "A"
    expanded = 0

    def holds(hist_a, hist_b) -> bool:
        word = [da.labels[s] | db.labels[t] for s, t in zip(hist_a, hist_b)]
        return ltlf.eval_trace(phi, word)

    memo: dict = {}

    def win(hist_a: list, hist_b: list, obligation: Formula, rem: int) -> bool:
        # the current prefix has already been checked by the caller
        nonlocal expanded
        if rem == 0:
            return stop_a
        key = (hist_a[-1], hist_b[-1], obligation, rem)
        hit = memo.get(key)
        if hit is not None:
            return hit
        expanded += 1
        if expanded > node_cap:
            raise OracleCapError(f"oracle expanded more than {node_cap} nodes")
        result = True
        for s2 in da.succ[hist_a[-1]]:
            hist_a.append(s2)
            found = False
            for t2 in db.succ[hist_b[-1]]:
                hist_b.append(t2)
                ok = holds(hist_a, hist_b)
                nxt = _step(obligation, da.labels[s2] | db.labels[t2])
                if stop_a:
                    found = ok and win(hist_a, hist_b, nxt, rem - 1)
                else:
                    found = ok or win(hist_a, hist_b, nxt, rem - 1)
                hist_b.pop()
                if found:
                    break
            hist_a.pop()
            if not found:
                result = False
                break
        memo[key] = result
        return result

    s0, t0 = da.init, db.init
    first = ltlf.eval_trace(phi, [da.labels[s0] | db.labels[t0]])
    if stop_a and not first:
        return False
    if not stop_a and first:
        return True
    ob0 = _step(phi, da.labels[s0] | db.labels[t0])
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * rounds + 200))
    try:
        return win([s0], [t0], ob0, rounds)
    finally:
        sys.setrecursionlimit(limit)


__all__ = ["OracleVerdict", "OracleCapError", "minmax_decide", "oracle_mbsd"]
