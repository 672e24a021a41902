"""DFAs for LTLf formulas, built by formula progression.

A progression state ("residual") is the obligation left on the rest of the
word after some letters have been read.  Residuals are kept as nested tuples
in a canonical form (flattened, sorted and simplified conjunctions and
disjunctions) so that equal obligations usually get the same representation.
Two reserved markers track the end of the word:

* ``ALIVE``: another letter must follow.  Produced by strong next.
* ``DEAD``: satisfied if the word ends here.  Produced by weak next.

After the last letter a residual is accepting iff it holds on the empty
suffix (:func:`end_accepting`).  The markers never leave this module; callers
see residuals only through opaque state ids and display strings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import ltlf
from .ltlf import Formula

__all__ = [
    "Dfa", "Progressor", "PropositionCapError", "StateExplosionError",
    "from_formula", "canon", "normalize", "progress", "end_accepting", "residual_str",
    "build_dfa", "minimize", "accepts", "to_dot", "to_json",
]

DEFAULT_PROP_CAP = 12
DEFAULT_STATE_CEILING = 2 ** 16

T = ("t",)
F = ("f",)
ALIVE = ("alive",)
DEAD = ("dead",)


class PropositionCapError(ValueError):
    pass


class StateExplosionError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# canonical residual constructors

def _lit(name: str, positive: bool):
    return ("lit", name, positive)


def _complement(x):
    tag = x[0]
    if tag == "lit":
        return ("lit", x[1], not x[2])
    if tag == "alive":
        return DEAD
    if tag == "dead":
        return ALIVE
    return None


def mk_and(items: Iterable) -> tuple:
    flat = set()
    for x in items:
        if x == F:
            return F
        if x == T:
            continue
        if x[0] == "and":
            flat.update(x[1])
        else:
            flat.add(x)
    for x in flat:
        c = _complement(x)
        if c is not None and c in flat:
            return F
    # absorption: a & (a | b) == a
    drop = [x for x in flat if x[0] == "or" and any(y in flat for y in x[1])]
    flat.difference_update(drop)
    if not flat:
        return T
    if len(flat) == 1:
        return next(iter(flat))
    return ("and", tuple(sorted(flat)))


def mk_or(items: Iterable) -> tuple:
    flat = set()
    for x in items:
        if x == T:
            return T
        if x == F:
            continue
        if x[0] == "or":
            flat.update(x[1])
        else:
            flat.add(x)
    for x in flat:
        c = _complement(x)
        if c is not None and c in flat:
            return T
    drop = [x for x in flat if x[0] == "and" and any(y in flat for y in x[1])]
    flat.difference_update(drop)
    if not flat:
        return F
    if len(flat) == 1:
        return next(iter(flat))
    return ("or", tuple(sorted(flat)))


def mk_until(a, b) -> tuple:
    if b == T or b == F:
        return b
    if a == F or a == b:
        return b
    return ("U", a, b)


def mk_release(a, b) -> tuple:
    if b == T or b == F:
        return b
    if a == T or a == b:
        return b
    return ("R", a, b)


def from_formula(f: Formula) -> tuple:
    """Canonical residual of an LTLf formula (converted to NNF first)."""
    return _from_nnf(ltlf.to_nnf(f))


def _from_nnf(f: Formula) -> tuple:
    if isinstance(f, ltlf.TrueF):
        return T
    if isinstance(f, ltlf.FalseF):
        return F
    if isinstance(f, ltlf.Atom):
        return _lit(f.name, True)
    if isinstance(f, ltlf.Not):
        return _lit(f.arg.name, False)
    if isinstance(f, ltlf.And):
        return mk_and([_from_nnf(f.left), _from_nnf(f.right)])
    if isinstance(f, ltlf.Or):
        return mk_or([_from_nnf(f.left), _from_nnf(f.right)])
    if isinstance(f, ltlf.Next):
        return ("X", _from_nnf(f.arg))
    if isinstance(f, ltlf.WeakNext):
        return ("N", _from_nnf(f.arg))
    if isinstance(f, ltlf.Until):
        return mk_until(_from_nnf(f.left), _from_nnf(f.right))
    if isinstance(f, ltlf.Release):
        return mk_release(_from_nnf(f.left), _from_nnf(f.right))
    if isinstance(f, ltlf.Eventually):
        return mk_until(T, _from_nnf(f.arg))
    if isinstance(f, ltlf.Globally):
        return mk_release(F, _from_nnf(f.arg))
    raise TypeError(f"formula not in NNF: {f!r}")


def canon(r: tuple) -> tuple:
    """Rebuild a residual bottom-up through the simplifying constructors."""
    tag = r[0]
    if tag == "and":
        return mk_and([canon(x) for x in r[1]])
    if tag == "or":
        return mk_or([canon(x) for x in r[1]])
    if tag in ("X", "N"):
        return (tag, canon(r[1]))
    if tag == "U":
        return mk_until(canon(r[1]), canon(r[2]))
    if tag == "R":
        return mk_release(canon(r[1]), canon(r[2]))
    return r


def normalize(r: tuple) -> tuple:
    """Top-level disjunctive normal form over the non-boolean parts of ``r``.

    Progression only ever mixes finitely many temporal subterms, so with
    cubes deduplicated and subsumed cubes dropped the set of reachable
    residuals is finite.  Without this, nested and/or can grow forever.
    """
    cubes = _dnf(r)
    cubes = [c for c in cubes if not any(o < c for o in cubes)]
    return mk_or([mk_and(c) for c in cubes])


def _dnf(r) -> set[frozenset]:
    tag = r[0]
    if tag == "t":
        return {frozenset()}
    if tag == "f":
        return set()
    if tag == "or":
        out: set[frozenset] = set()
        for x in r[1]:
            out |= _dnf(x)
        return out
    if tag == "and":
        out = {frozenset()}
        for x in r[1]:
            out = {a | b for a in out for b in _dnf(x)}
            out = {c for c in out if not any(_complement(y) in c for y in c)}
        return out
    return {frozenset([r])}


def progress(r: tuple, letter: Iterable[str], _memo: dict | None = None) -> tuple:
    """Residual obligation after reading ``letter``."""
    a = letter if isinstance(letter, (set, frozenset)) else frozenset(letter)
    memo = {} if _memo is None else _memo
    return normalize(_prog(r, a, memo))


def _prog(r, a, memo):
    hit = memo.get(r)
    if hit is not None:
        return hit
    tag = r[0]
    if tag == "t" or tag == "f":
        out = r
    elif tag == "lit":
        out = T if ((r[1] in a) == r[2]) else F
    elif tag == "alive":
        out = T
    elif tag == "dead":
        out = F
    elif tag == "and":
        out = mk_and([_prog(x, a, memo) for x in r[1]])
    elif tag == "or":
        out = mk_or([_prog(x, a, memo) for x in r[1]])
    elif tag == "X":
        out = mk_and([r[1], ALIVE])
    elif tag == "N":
        out = mk_or([r[1], DEAD])
    elif tag == "U":
        out = mk_or([_prog(r[2], a, memo), mk_and([_prog(r[1], a, memo), r])])
    elif tag == "R":
        out = mk_and([_prog(r[2], a, memo), mk_or([_prog(r[1], a, memo), r])])
    else:
        raise ValueError(f"bad residual {r!r}")
    memo[r] = out
    return out


def end_accepting(r: tuple) -> bool:
    """Truth of a residual on the empty suffix (the word has ended)."""
    tag = r[0]
    if tag in ("t", "N", "R", "dead"):
        return True
    if tag in ("f", "lit", "X", "U", "alive"):
        return False
    if tag == "and":
        return all(end_accepting(x) for x in r[1])
    if tag == "or":
        return any(end_accepting(x) for x in r[1])
    raise ValueError(f"bad residual {r!r}")


def residual_str(r: tuple) -> str:
    tag = r[0]
    if tag == "t":
        return "true"
    if tag == "f":
        return "false"
    if tag == "alive":
        return "[more]"
    if tag == "dead":
        return "[end]"
    if tag == "lit":
        return r[1] if r[2] else "!" + r[1]
    if tag == "X":
        return f"(X {residual_str(r[1])})"
    if tag == "N":
        return f"(N {residual_str(r[1])})"
    if tag in ("U", "R"):
        return f"({residual_str(r[1])} {tag} {residual_str(r[2])})"
    sep = " & " if tag == "and" else " | "
    return "(" + sep.join(residual_str(x) for x in r[1]) + ")"


def _residual_props(r, out: set) -> None:
    tag = r[0]
    if tag == "lit":
        out.add(r[1])
    elif tag in ("and", "or"):
        for x in r[1]:
            _residual_props(x, out)
    elif tag in ("X", "N"):
        _residual_props(r[1], out)
    elif tag in ("U", "R"):
        _residual_props(r[1], out)
        _residual_props(r[2], out)


class Progressor:
    """Lazy automaton for one formula: residuals are interned as integer ids.

    State 0 is the formula itself.  Transitions are computed on demand for
    exactly the letters asked for and cached.  Not thread-safe; use one
    instance per construction.
    """

    def __init__(self, f: Formula, max_states: int = DEFAULT_STATE_CEILING):
        root = normalize(from_formula(f))
        self.relevant = frozenset(ltlf.propositions(f))
        self.max_states = max_states
        self.residuals: list[tuple] = []
        self._ids: dict[tuple, int] = {}
        self._edges: dict[tuple[int, frozenset], int] = {}
        self._memos: dict[frozenset, dict] = {}
        self._intern(root)

    def __len__(self) -> int:
        return len(self.residuals)

    def _intern(self, r: tuple) -> int:
        q = self._ids.get(r)
        if q is None:
            if len(self.residuals) >= self.max_states:
                raise StateExplosionError(
                    f"more than {self.max_states} progression states; last residual "
                    f"{residual_str(r)[:200]}")
            q = len(self.residuals)
            self._ids[r] = q
            self.residuals.append(r)
        return q

    def step(self, q: int, letter: Iterable[str]) -> int:
        a = self.relevant.intersection(letter)
        key = (q, a)
        nxt = self._edges.get(key)
        if nxt is None:
            memo = self._memos.setdefault(a, {})
            nxt = self._intern(normalize(_prog(self.residuals[q], a, memo)))
            self._edges[key] = nxt
        return nxt

    def run(self, word: Iterable[Iterable[str]], q: int = 0) -> int:
        for letter in word:
            q = self.step(q, letter)
        return q

    def accepting(self, q: int) -> bool:
        return end_accepting(self.residuals[q])

    def label(self, q: int) -> str:
        return residual_str(self.residuals[q])


# --------------------------------------------------------------------------
# explicit DFAs

@dataclass(frozen=True)
class Dfa:
    """Complete DFA over the alphabet ``2^props``.

    Letters are indexed by bitmask: bit ``j`` of a letter index is set iff
    ``props[j]`` is in the letter.  ``trans[q][mask]`` is the successor.
    """

    props: tuple[str, ...]
    init: int
    trans: tuple[tuple[int, ...], ...]
    accepting: frozenset[int]
    labels: tuple[str, ...] = field(default=(), compare=False)

    @property
    def n_states(self) -> int:
        return len(self.trans)

    def letter_index(self, letter: Iterable[str]) -> int:
        idx = 0
        for p in letter:
            try:
                idx |= 1 << self.props.index(p)
            except ValueError:
                raise ValueError(f"unknown proposition {p!r} in letter") from None
        return idx

    def letter_of(self, mask: int) -> frozenset[str]:
        return frozenset(p for j, p in enumerate(self.props) if mask >> j & 1)

    def run(self, word: Sequence[Iterable[str]]) -> int:
        q = self.init
        for letter in word:
            q = self.trans[q][self.letter_index(letter)]
        return q


def build_dfa(
    f: Formula,
    props: Sequence[str] | None = None,
    *,
    cap: int = DEFAULT_PROP_CAP,
    max_states: int = DEFAULT_STATE_CEILING,
    minimal: bool = False,
) -> Dfa:
    """Explicit DFA accepting exactly the nonempty words satisfying ``f``.

    States are discovered breadth-first from the formula by progressing over
    all ``2^len(props)`` letters.  Raises :class:`PropositionCapError` when the
    alphabet is too large to enumerate.
    """
    if props is None:
        props = sorted(ltlf.propositions(f))
    props = tuple(props)
    if len(set(props)) != len(props):
        raise ValueError("duplicate propositions")
    missing = ltlf.propositions(f) - set(props)
    if missing:
        raise ValueError(f"formula mentions propositions outside the alphabet: {sorted(missing)}")
    if len(props) > cap:
        raise PropositionCapError(
            f"{len(props)} propositions exceed the explicit-alphabet cap of {cap}")

    prog = Progressor(f, max_states=max_states)
    letters = [frozenset(p for j, p in enumerate(props) if m >> j & 1)
               for m in range(1 << len(props))]
    trans: list[list[int]] = []
    q = 0
    while q < len(prog):
        row = []
        for a in letters:
            row.append(prog.step(q, a))
        trans.append(row)
        q += 1
    acc = frozenset(q for q in range(len(prog)) if prog.accepting(q))
    dfa = Dfa(props, 0, tuple(tuple(r) for r in trans), acc,
              tuple(prog.label(q) for q in range(len(prog))))
    return minimize(dfa) if minimal else dfa


def accepts(d: Dfa, word: Sequence[Iterable[str]]) -> bool:
    if len(word) == 0:
        raise ValueError("acceptance is only defined for nonempty words")
    return d.run(word) in d.accepting


def minimize(d: Dfa) -> Dfa:
    """Hopcroft partition refinement on the reachable part of ``d``.

    The result is renumbered in breadth-first discovery order from the
    initial state, so equal languages give identical outputs.
    """
    n_letters = 1 << len(d.props)
    reach = _bfs_order(d.init, d.trans)
    rset = set(reach)

    inv: list[dict[int, list[int]]] = [dict() for _ in range(n_letters)]
    for q in reach:
        for c in range(n_letters):
            inv[c].setdefault(d.trans[q][c], []).append(q)

    acc = frozenset(q for q in reach if q in d.accepting)
    rej = frozenset(rset - acc)
    partition = [b for b in (acc, rej) if b]
    block_of = {}
    for i, b in enumerate(partition):
        for q in b:
            block_of[q] = i
    work = [min(partition, key=len)] if len(partition) == 2 else []
    while work:
        splitter = work.pop()
        for c in range(n_letters):
            pre = set()
            for q in splitter:
                pre.update(inv[c].get(q, ()))
            if not pre:
                continue
            touched = sorted({block_of[q] for q in pre})
            for bi in touched:
                block = partition[bi]
                inside = block & pre
                if len(inside) == len(block):
                    continue
                outside = block - inside
                partition[bi] = inside
                partition.append(outside)
                ni = len(partition) - 1
                for q in outside:
                    block_of[q] = ni
                if block in work:
                    work.remove(block)
                    work.append(inside)
                    work.append(outside)
                else:
                    work.append(inside if len(inside) <= len(outside) else outside)

    # quotient automaton, renumbered by BFS from the initial block
    qtrans = {}
    for bi, block in enumerate(partition):
        rep = min(block)
        qtrans[bi] = [block_of[d.trans[rep][c]] for c in range(n_letters)]
    order = _bfs_order(block_of[d.init], qtrans)
    new_id = {b: i for i, b in enumerate(order)}
    trans = tuple(tuple(new_id[x] for x in qtrans[b]) for b in order)
    accepting = frozenset(new_id[b] for b in order if min(partition[b]) in d.accepting)
    labels = ()
    if d.labels:
        labels = tuple(d.labels[min(partition[b])] for b in order)
    return Dfa(d.props, 0, trans, accepting, labels)


def _bfs_order(init: int, trans) -> list[int]:
    seen = {init}
    order = [init]
    queue = deque([init])
    while queue:
        q = queue.popleft()
        for x in trans[q]:
            if x not in seen:
                seen.add(x)
                order.append(x)
                queue.append(x)
    return order


def _letter_str(letter: Iterable[str]) -> str:
    return "{" + ",".join(sorted(letter)) + "}"


def to_dot(d: Dfa) -> str:
    lines = ["digraph dfa {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in range(d.n_states):
        shape = "doublecircle" if q in d.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q}"];')
    lines.append(f"  __start -> q{d.init};")
    for q in range(d.n_states):
        for m, x in enumerate(d.trans[q]):
            lines.append(f'  q{q} -> q{x} [label="{_letter_str(d.letter_of(m))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(d: Dfa) -> dict:
    states = []
    for q in range(d.n_states):
        entry = {"id": q, "accepting": q in d.accepting}
        if d.labels:
            entry["residual"] = d.labels[q]
        states.append(entry)
    transitions = [
        {"from": q, "letter": sorted(d.letter_of(m)), "to": x}
        for q in range(d.n_states) for m, x in enumerate(d.trans[q])
    ]
    return {"props": list(d.props), "init": d.init, "states": states,
            "transitions": transitions}
