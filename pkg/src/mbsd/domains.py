"""Dynamic domains: finite serial labelled transition systems.

States are dense integers ``0..n-1`` internally; every state also carries a
user-facing string id used in JSON documents and strategy files.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import ltlf
from .mapping import MappingSpec

__all__ = [
    "DynamicDomain", "DomainError", "validate", "is_trace", "is_tree_like",
    "traces", "gen_pacman", "pacman_state_estimate", "gen_random",
    "encode", "decode", "dumps", "loads",
]

DEFAULT_STATE_CEILING = 10 ** 6


class DomainError(ValueError):
    """Raised with one entry in ``problems`` per violated invariant."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class DynamicDomain:
    props: frozenset[str]
    ids: tuple[str, ...]
    init: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[frozenset[str], ...]
    succ: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.ids)
        out: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.edges:
            if 0 <= a < n and 0 <= b < n:
                out[a].append(b)
        object.__setattr__(self, "succ", tuple(tuple(sorted(set(x))) for x in out))

    @classmethod
    def build(
        cls,
        labels: Sequence[Iterable[str]],
        edges: Iterable[tuple[int, int]],
        init: int = 0,
        props: Iterable[str] | None = None,
        ids: Sequence[str] | None = None,
    ) -> DynamicDomain:
        """Convenience constructor; does not validate (call :func:`validate`)."""
        labs = tuple(frozenset(x) for x in labels)
        if props is None:
            props = frozenset().union(*labs) if labs else frozenset()
        if ids is None:
            ids = [f"s{i}" for i in range(len(labs))]
        return cls(frozenset(props), tuple(ids), init,
                   tuple(sorted(set((int(a), int(b)) for a, b in edges))), labs)

    @property
    def n_states(self) -> int:
        return len(self.ids)

    def index(self, state_id: str) -> int:
        try:
            return self.ids.index(state_id)
        except ValueError:
            raise KeyError(f"unknown state id {state_id!r}") from None


def validate(d: DynamicDomain) -> None:
    problems = []
    n = d.n_states
    if n == 0:
        problems.append("domain has no states")
    if len(set(d.ids)) != n:
        dup = sorted({x for x in d.ids if d.ids.count(x) > 1})
        problems.append(f"duplicate state ids {dup}")
    if not (isinstance(d.init, int) and 0 <= d.init < n):
        problems.append(f"initial state {d.init!r} is not a state")
    if len(d.labels) != n:
        problems.append(f"{len(d.labels)} labels for {n} states")
    for a, b in d.edges:
        if not (0 <= a < n and 0 <= b < n):
            problems.append(f"transition ({a}, {b}) has a dangling endpoint")
    for s, lab in enumerate(d.labels):
        extra = lab - d.props
        if extra:
            problems.append(f"label of state {d.ids[s] if s < n else s!r} uses "
                            f"propositions outside the domain: {sorted(extra)}")
    for s in range(n):
        if not d.succ[s]:
            problems.append(f"state {d.ids[s]!r} has no successor (domain not serial)")
    if problems:
        raise DomainError(problems)


def is_trace(d: DynamicDomain, seq: Sequence[int]) -> bool:
    for s in seq:
        if not 0 <= s < d.n_states:
            raise ValueError(f"unknown state {s!r}")
    if not seq:
        return False
    return all(b in d.succ[a] for a, b in zip(seq, seq[1:]))


def is_tree_like(d: DynamicDomain) -> bool:
    """Tree rooted at the initial state, apart from self-loops on leaves."""
    n = d.n_states
    indeg = [0] * n
    for s in range(n):
        proper = [x for x in d.succ[s] if x != s]
        if s in d.succ[s] and proper:
            return False
        for x in proper:
            indeg[x] += 1
    if indeg[d.init] != 0:
        return False
    if any(indeg[s] != 1 for s in range(n) if s != d.init):
        return False
    seen = {d.init}
    queue = deque([d.init])
    while queue:
        s = queue.popleft()
        for x in d.succ[s]:
            if x not in seen:
                seen.add(x)
                queue.append(x)
    return len(seen) == n


def traces(d: DynamicDomain, length: int, start: int | None = None):
    """Yield every trace of exactly ``length`` states from ``start`` (default: init)."""
    s0 = d.init if start is None else start

    def rec(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in d.succ[prefix[-1]]:
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()

    if length >= 1:
        yield from rec([s0])


# --------------------------------------------------------------------------
# generators

GHOST_NAMES = ("bk", "pk", "ik", "cl")
_MOVES = ((0, 0), (0, 1), (0, -1), (1, 0), (-1, 0))
_KING_MOVES = tuple((dx, dy) for dx in (0, 1, -1) for dy in (0, 1, -1))


def _ghost_name(j: int) -> str:
    return GHOST_NAMES[j] if j < len(GHOST_NAMES) else f"g{j}"


def pacman_state_estimate(n: int, walls: Iterable[tuple[int, int]] = ()) -> int:
    """Pac-Man positions times candy subsets of the other free cells (before pruning)."""
    free = n * n - len(set(walls))
    return free * 2 ** (free - 1)


def gen_pacman(
    n: int,
    ghosts: int = 1,
    walls: Iterable[tuple[int, int]] | int = (),
    seed: int | None = None,
    max_states: int = DEFAULT_STATE_CEILING,
    diagonal_ghosts: bool = False,
) -> tuple[DynamicDomain, DynamicDomain, MappingSpec]:
    """Pac-Man on an ``n x n`` grid.

    Returns ``(ghost_domain, pacman_domain, mapping)``; the ghosts play agent A
    and Pac-Man plays agent B.  Pac-Man starts at (0, 0) with a candy on every
    other free cell and moves to a 4-neighbour or stays; walls block it.  The
    ghosts start together at (n//2, n//2) and move the same way all at once,
    ignoring walls; ``diagonal_ghosts`` lets them use all 8 neighbours.  The
    mapping has one conjunct per free cell: a ghost on the cell implies
    Pac-Man is not there.

    ``walls`` is a set of cells, or an integer number of walls drawn at
    random with ``seed``.
    """
    if n < 2:
        raise ValueError(f"grid size must be at least 2, got {n}")
    if ghosts < 1:
        raise ValueError(f"need at least one ghost, got {ghosts}")
    cells = [(x, y) for x in range(n) for y in range(n)]
    if isinstance(walls, int):
        rng = random.Random(seed)
        walls = rng.sample([c for c in cells if c != (0, 0)], walls)
    wallset = {tuple(w) for w in walls}
    for w in wallset:
        if w not in cells:
            raise ValueError(f"wall {w} outside the grid")
    if (0, 0) in wallset:
        raise ValueError("cell (0, 0) must be free")
    free = [c for c in cells if c not in wallset]
    pac_estimate = pacman_state_estimate(n, wallset)
    ghost_estimate = (n * n) ** ghosts
    if pac_estimate > max_states or ghost_estimate > max_states:
        raise ValueError(f"state estimate {max(pac_estimate, ghost_estimate)} exceeds ceiling {max_states}")

    def near(c, allowed, moves=_MOVES):
        x, y = c
        return [(x + dx, y + dy) for dx, dy in moves if (x + dx, y + dy) in allowed]

    # Pac-Man: state = (position, candies)
    freeset = set(free)
    start = ((0, 0), frozenset(c for c in free if c != (0, 0)))
    index = {start: 0}
    order = [start]
    edges = []
    queue = deque([start])
    while queue:
        st = queue.popleft()
        pos, candies = st
        for nxt in near(pos, freeset):
            succ = (nxt, candies - {nxt})
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
                queue.append(succ)
            edges.append((index[st], index[succ]))
    pac_props = {f"p_{x}_{y}" for x, y in free} | {f"c_{x}_{y}" for x, y in free}
    pac_labels = [{f"p_{p[0]}_{p[1]}"} | {f"c_{x}_{y}" for x, y in cs} for p, cs in order]
    pac_ids = [f"p{p[0]}_{p[1]}/" + "".join("1" if c in cs else "0" for c in free)
               for p, cs in order]
    pacman = DynamicDomain.build(pac_labels, edges, 0, pac_props, pac_ids)

    # ghosts: state = tuple of positions
    ghost_moves = _KING_MOVES if diagonal_ghosts else _MOVES
    allcells = set(cells)
    g0 = tuple([(n // 2, n // 2)] * ghosts)
    gindex = {g0: 0}
    gorder = [g0]
    gedges = []
    queue = deque([g0])
    while queue:
        st = queue.popleft()
        for succ in itertools.product(*(near(c, allcells, ghost_moves) for c in st)):
            if succ not in gindex:
                gindex[succ] = len(gorder)
                gorder.append(succ)
                queue.append(succ)
            gedges.append((gindex[st], gindex[succ]))
    ghost_props = {f"{_ghost_name(j)}_{x}_{y}" for j in range(ghosts) for x, y in cells}
    ghost_labels = [{f"{_ghost_name(j)}_{x}_{y}" for j, (x, y) in enumerate(st)} for st in gorder]
    ghost_ids = ["g" + ";".join(f"{x}_{y}" for x, y in st) for st in gorder]
    ghost = DynamicDomain.build(ghost_labels, gedges, 0, ghost_props, ghost_ids)

    pairs = []
    for x, y in free:
        danger = ltlf.disjoin([ltlf.Atom(f"{_ghost_name(j)}_{x}_{y}") for j in range(ghosts)])
        pairs.append((danger, ltlf.Not(ltlf.Atom(f"p_{x}_{y}"))))
    return ghost, pacman, MappingSpec.pointwise(pairs)


def gen_random(
    states: int,
    branching: int,
    props: int,
    tree_like: bool = False,
    seed: int | None = None,
    prefix: str = "p",
) -> DynamicDomain:
    """Random serial domain; deterministic for a given seed.

    Propositions are named ``{prefix}0 .. {prefix}{props-1}`` and each holds
    in a state with probability 1/2.  With ``tree_like`` the transitions form
    a tree of out-degree at most ``branching`` with self-loops on the leaves.
    """
    if states < 1 or branching < 1 or props < 0:
        raise ValueError("states and branching must be >= 1, props >= 0")
    rng = random.Random(seed)
    names = [f"{prefix}{j}" for j in range(props)]
    labels = [{p for p in names if rng.random() < 0.5} for _ in range(states)]
    edges = []
    if tree_like:
        children = [0] * states
        for s in range(1, states):
            parent = rng.choice([p for p in range(s) if children[p] < branching])
            children[parent] += 1
            edges.append((parent, s))
        edges.extend((s, s) for s in range(states) if children[s] == 0)
    else:
        for s in range(states):
            for x in rng.sample(range(states), rng.randint(1, min(branching, states))):
                edges.append((s, x))
    return DynamicDomain.build(labels, edges, 0, names)


# --------------------------------------------------------------------------
# JSON

def encode(d: DynamicDomain) -> dict:
    order = sorted(range(d.n_states), key=lambda s: d.ids[s])
    return {
        "props": sorted(d.props),
        "states": [{"id": d.ids[s], "label": sorted(d.labels[s])} for s in order],
        "init": d.ids[d.init],
        "transitions": sorted([d.ids[a], d.ids[b]] for a, b in d.edges),
    }


def decode(doc: dict | str) -> DynamicDomain:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise DomainError([f"malformed JSON: {exc}"]) from exc
    if not isinstance(doc, dict):
        raise DomainError(["domain document must be a JSON object"])
    for key in ("props", "states", "init", "transitions"):
        if key not in doc:
            raise DomainError([f"domain document is missing {key!r}"])
    try:
        ids = [str(s["id"]) for s in doc["states"]]
        labels = [frozenset(map(str, s.get("label", []))) for s in doc["states"]]
    except (TypeError, KeyError) as exc:
        raise DomainError([f"malformed state entry: {exc!r}"]) from exc
    problems = []
    seen = set()
    for x in ids:
        if x in seen:
            problems.append(f"duplicate state id {x!r}")
        seen.add(x)
    pos = {x: i for i, x in enumerate(ids)}
    if doc["init"] not in pos:
        problems.append(f"initial state {doc['init']!r} is not a declared state")
    edges = []
    seen_edges = set()
    for tr in doc["transitions"]:
        if not (isinstance(tr, (list, tuple)) and len(tr) == 2):
            problems.append(f"malformed transition {tr!r}")
            continue
        a, b = tr
        if a not in pos or b not in pos:
            problems.append(f"transition {tr!r} references an unknown state")
            continue
        if (a, b) in seen_edges:
            problems.append(f"duplicate transition {tr!r}")
        seen_edges.add((a, b))
        edges.append((pos[a], pos[b]))
    if problems:
        raise DomainError(problems)
    d = DynamicDomain(frozenset(map(str, doc["props"])), tuple(ids), pos[doc["init"]],
                      tuple(sorted(set(edges))), tuple(labels))
    validate(d)
    return d


def dumps(d: DynamicDomain) -> str:
    return json.dumps(encode(d), indent=1, sort_keys=True)


def loads(text: str) -> DynamicDomain:
    return decode(text)
