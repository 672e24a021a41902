"""Quantified Boolean formulas in prenex CNF.

Parsing (a QDIMACS subset), brute-force evaluation, the rewrite into the
"at most one universal literal per clause" form, and the encoding of such
formulas as target-mapping MBSD instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import ltlf
from .domains import DynamicDomain
from .mapping import MappingSpec

FORALL = "a"
EXISTS = "e"
EVAL_VAR_CAP = 22


class QbfError(ValueError):
    pass


@dataclass(frozen=True)
class QbfCnf:
    prefix: tuple[tuple[str, int], ...]
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for q, v in self.prefix:
            if q not in (FORALL, EXISTS):
                raise QbfError(f"unknown quantifier {q!r}")
            if v <= 0:
                raise QbfError(f"variables are positive integers, got {v}")
            if v in seen:
                raise QbfError(f"variable {v} quantified twice")
            seen.add(v)
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) not in seen:
                    raise QbfError(f"clause {list(c)} uses free variable {abs(lit)}")

    @property
    def quantifier(self) -> dict[int, str]:
        return {v: q for q, v in self.prefix}

    @property
    def n_vars(self) -> int:
        return len(self.prefix)

    def universals(self) -> list[int]:
        return [v for q, v in self.prefix if q == FORALL]

    def existentials(self) -> list[int]:
        return [v for q, v in self.prefix if q == EXISTS]

    def is_cnf1(self) -> bool:
        quant = self.quantifier
        return all(sum(quant[abs(x)] == FORALL for x in c) <= 1 for c in self.clauses)

    def is_strictly_alternating(self) -> bool:
        """Prefix reads forall, exists, forall, exists, ... and has even length."""
        if len(self.prefix) % 2:
            return False
        return all(q == (FORALL if i % 2 == 0 else EXISTS) for i, (q, _) in enumerate(self.prefix))

    def to_qdimacs(self) -> str:
        top = max((v for _, v in self.prefix), default=0)
        lines = [f"p cnf {top} {len(self.clauses)}"]
        for q, v in self.prefix:
            lines.append(f"{q} {v} 0")
        for c in self.clauses:
            lines.append(" ".join(map(str, c)) + " 0")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        sym = {FORALL: "A", EXISTS: "E"}
        head = " ".join(f"{sym[q]}x{v}" for q, v in self.prefix)
        body = " & ".join("(" + " | ".join(("!" if x < 0 else "") + f"x{abs(x)}" for x in c) + ")"
                          for c in self.clauses)
        return f"{head} . {body or 'true'}"


def parse_qdimacs(text: str) -> QbfCnf:
    """Parse ``p cnf V C``, ``a``/``e`` quantifier lines and 0-terminated clauses."""
    header = None
    prefix: list[tuple[str, int]] = []
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise QbfError(f"line {lineno}: second header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise QbfError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise QbfError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if header is None:
            raise QbfError(f"line {lineno}: content before the 'p cnf' header")
        if parts[0] in (FORALL, EXISTS):
            if clauses or pending:
                raise QbfError(f"line {lineno}: quantifier line after clauses")
            try:
                nums = [int(x) for x in parts[1:]]
            except ValueError:
                raise QbfError(f"line {lineno}: malformed quantifier line") from None
            if not nums or nums[-1] != 0:
                raise QbfError(f"line {lineno}: quantifier line must end with 0")
            for v in nums[:-1]:
                if not 1 <= v <= header[0]:
                    raise QbfError(f"line {lineno}: variable {v} outside 1..{header[0]}")
                prefix.append((parts[0], v))
            continue
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise QbfError(f"line {lineno}: malformed clause {line!r}") from None
        for x in nums:
            if x == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                if abs(x) > header[0]:
                    raise QbfError(f"line {lineno}: variable {abs(x)} exceeds the declared {header[0]}")
                pending.append(x)
    if header is None:
        raise QbfError("missing 'p cnf' header")
    if pending:
        raise QbfError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise QbfError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return QbfCnf(tuple(prefix), tuple(clauses))


def eval_qbf(q: QbfCnf) -> bool:
    """Game-tree evaluation in prefix order."""
    if q.n_vars > EVAL_VAR_CAP:
        raise QbfError(f"{q.n_vars} variables exceed the evaluation cap {EVAL_VAR_CAP}")
    clauses = q.clauses
    prefix = q.prefix
    value: dict[int, bool] = {}

    def status() -> bool | None:
        undecided = False
        for c in clauses:
            sat = False
            open_lit = False
            for x in c:
                v = value.get(abs(x))
                if v is None:
                    open_lit = True
                elif v == (x > 0):
                    sat = True
                    break
            if not sat:
                if not open_lit:
                    return False
                undecided = True
        return None if undecided else True

    def rec(i: int) -> bool:
        st = status()
        if st is not None:
            return st
        quant, var = prefix[i]
        for b in (False, True):
            value[var] = b
            r = rec(i + 1)
            del value[var]
            if quant == FORALL and not r:
                return False
            if quant == EXISTS and r:
                return True
        return quant == FORALL

    return rec(0)


def _alternate(prefix: list[tuple[str, int]], fresh: int) -> tuple[list[tuple[str, int]], int]:
    """Insert dummy variables so the prefix reads forall/exists strictly, even length."""
    out: list[tuple[str, int]] = []
    for q, v in prefix:
        want = FORALL if len(out) % 2 == 0 else EXISTS
        if q != want:
            out.append((want, fresh))
            fresh += 1
        out.append((q, v))
    if len(out) % 2:
        out.append((EXISTS, fresh))
        fresh += 1
    return out, fresh


def cnf_to_cnf1(q: QbfCnf) -> QbfCnf:
    """Rewrite so that every clause has at most one universal literal.

    Each universal x gets a fresh existential copy z placed right after it,
    tied to it by the clauses (x | !z) and (!x | z); the original clauses use
    z instead of x.  Dummy variables then restore strict alternation.
    """
    quant = q.quantifier
    fresh = max((v for _, v in q.prefix), default=0) + 1
    copy: dict[int, int] = {}
    prefix: list[tuple[str, int]] = []
    for qu, v in q.prefix:
        prefix.append((qu, v))
        if qu == FORALL:
            copy[v] = fresh
            prefix.append((EXISTS, fresh))
            fresh += 1
    clauses = []
    for c in q.clauses:
        clauses.append(tuple((copy[abs(x)] if x > 0 else -copy[abs(x)]) if quant[abs(x)] == FORALL else x
                             for x in c))
    for x, z in copy.items():
        clauses.append((x, -z))
        clauses.append((-x, z))
    prefix, fresh = _alternate(prefix, fresh)
    return QbfCnf(tuple(prefix), tuple(clauses))


# --------------------------------------------------------------------------
# QBF-CNF-1 to MBSD

def prop_name(agent: str, i: int, value: bool | None) -> str:
    """``p<agent>_<i>_T`` / ``_F``; ``value=None`` gives the end proposition ``p<agent>_star``."""
    if value is None:
        return f"p{agent}_star"
    return f"p{agent}_{i}_{'T' if value else 'F'}"


def gadget_domain(agent: str, n: int, star_at_start: bool = False) -> DynamicDomain:
    """Chain of n+1 major states with a true and a false detour between neighbours.

    The last major state carries the end proposition; ``star_at_start`` puts
    it on the first major state too.
    """
    ids, labels, edges = [], [], []

    def add(name, label):
        ids.append(f"{agent}_{name}")
        labels.append(frozenset(label))
        return len(ids) - 1

    star = {prop_name(agent, 0, None)}
    majors = [add(f"s{i}", star if (i == 1 and star_at_start) else ()) for i in range(1, n + 1)]
    majors.append(add(f"s{n + 1}", {prop_name(agent, 0, None)}))
    for i in range(1, n + 1):
        top = add(f"s{i}T", {prop_name(agent, i, True)})
        bot = add(f"s{i}F", {prop_name(agent, i, False)})
        edges += [(majors[i - 1], top), (majors[i - 1], bot), (top, majors[i]), (bot, majors[i])]
    edges.append((majors[n], majors[n]))
    props = {prop_name(agent, i, b) for i in range(1, n + 1) for b in (True, False)}
    props.add(prop_name(agent, 0, None))
    return DynamicDomain.build(labels, edges, 0, props, ids)


def qbf1_to_mbsd(q: QbfCnf, anchor_star: bool = True):
    """Encode a strictly alternating QBF-CNF-1 formula as a target MBSD instance.

    The i-th universal variable is chosen by A and the i-th existential one
    by B, each by picking the true or false detour of its gadget.  The
    instance is realizable iff the formula is true.

    B may stop on any prefix, so ``F pA_star`` has to hold from the first
    instant for the clause and stopping conjuncts to bite; ``anchor_star``
    therefore also labels A's first state with ``pA_star``.  With
    ``anchor_star=False`` every premise is false at the start and B wins by
    stopping at once, whatever the formula.
    """
    from .reductions import STOP_B, MbsdInstance

    if not q.is_strictly_alternating():
        raise QbfError("prefix must alternate forall/exists one variable at a time")
    if not q.is_cnf1():
        raise QbfError("some clause has more than one universal literal")
    n = len(q.prefix) // 2
    rank = {v: i // 2 + 1 for i, (_, v) in enumerate(q.prefix)}
    quant = q.quantifier
    pairs = []
    for c in q.clauses:
        univ = [x for x in c if quant[abs(x)] == FORALL]
        exist = [x for x in c if quant[abs(x)] == EXISTS]
        if univ:
            x = univ[0]
            # the clause is !l -> C_B, and !l holds when A took the opposite detour
            premise = ltlf.Atom(prop_name("A", rank[abs(x)], x < 0))
        else:
            premise = ltlf.Atom(prop_name("A", 0, None))
        conclusion = ltlf.disjoin([ltlf.Atom(prop_name("B", rank[abs(x)], x > 0)) for x in exist])
        pairs.append((premise, conclusion))
    pairs.append((ltlf.Atom(prop_name("A", 0, None)), ltlf.Atom(prop_name("B", 0, None))))
    return MbsdInstance(gadget_domain("A", n, anchor_star), gadget_domain("B", n),
                        MappingSpec.target(pairs), STOP_B)


# --------------------------------------------------------------------------
# random formulas

def random_qbf(seed: int, n_vars: int = 4, n_clauses: int = 4, width: int = 3) -> QbfCnf:
    rng = random.Random(seed)
    prefix = tuple((rng.choice((FORALL, EXISTS)), v) for v in range(1, n_vars + 1))
    clauses = []
    for _ in range(n_clauses):
        vs = rng.sample(range(1, n_vars + 1), rng.randint(1, min(width, n_vars)))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return QbfCnf(prefix, tuple(clauses))


def random_cnf1(seed: int, n: int = 2, n_clauses: int = 3, width: int = 2) -> QbfCnf:
    """Strictly alternating formula with ``n`` universals and ``n`` existentials."""
    rng = random.Random(seed)
    prefix = tuple(((FORALL, v) if v % 2 else (EXISTS, v)) for v in range(1, 2 * n + 1))
    univ = [v for v in range(1, 2 * n + 1) if v % 2]
    exist = [v for v in range(1, 2 * n + 1) if not v % 2]
    clauses = []
    for _ in range(n_clauses):
        lits = []
        if rng.random() < 0.6:
            lits.append(rng.choice(univ))
        lits += rng.sample(exist, rng.randint(0 if lits else 1, min(width, n)))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in lits))
    return QbfCnf(prefix, tuple(clauses))


WORKED_EXAMPLE_QDIMACS = """\
c forall x1A exists x1B forall x2A exists x2B
p cnf 4 3
a 1 0
e 2 0
a 3 0
e 4 0
1 2 4 0
-3 -2 0
2 -4 0
"""
