"""LTLf formulas: syntax tree, parser, printer, negation normal form and
finite-trace evaluation.

Traces are sequences of letters; a letter is any collection of proposition
names (the propositions true at that instant).  Evaluation follows the usual
finite-trace reading: ``X`` is a *strong* next (false at the last instant),
``F``/``G``/``U`` quantify over positions up to the last one.

``WeakNext`` and ``Release`` are never produced by :func:`parse`; they only
appear in the output of :func:`to_nnf`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Formula", "TrueF", "FalseF", "Atom", "Not", "And", "Or", "Implies", "Iff",
    "Next", "WeakNext", "Until", "Release", "Eventually", "Globally",
    "TRUE", "FALSE", "LtlfSyntaxError", "UnknownAtomError", "TemporalOperatorError",
    "parse", "to_str", "to_nnf", "eval_trace", "eval_assignment", "eval_words",
    "propositions", "is_temporal_free", "conjoin", "disjoin", "random_formula",
]


class Formula:
    """Base class of all formula nodes.  Nodes are immutable and compare structurally."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_str(self)

    # a little sugar for building formulas in code and tests
    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)


@dataclass(frozen=True, slots=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True, slots=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class WeakNext(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Globally(Formula):
    arg: Formula


TRUE = TrueF()
FALSE = FalseF()

_UNARY = (Not, Next, WeakNext, Eventually, Globally)
_BINARY = (And, Or, Implies, Iff, Until, Release)
_TEMPORAL = (Next, WeakNext, Until, Release, Eventually, Globally)


class LtlfSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownAtomError(ValueError):
    pass


class TemporalOperatorError(ValueError):
    pass


# --------------------------------------------------------------------------
# parsing

_KEYWORDS = {"true", "false", "X", "F", "G", "U"}
_TOKEN_RE = re.compile(r"\s*(?:(<->|->|[!&|()])|([A-Za-z_][A-Za-z0-9_]*))")

# binary operators, loosest first; (symbol, constructor, right associative)
_LEVELS = [
    ("<->", Iff, False),
    ("->", Implies, True),
    ("|", Or, False),
    ("&", And, False),
    ("U", Until, True),
]


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LtlfSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append(("<eof>", n))
    return tokens


class _Parser:
    def __init__(self, text: str, universe: frozenset[str] | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.universe = universe

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.binary(0)
        if self.peek() != "<eof>":
            raise LtlfSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def binary(self, level: int) -> Formula:
        if level == len(_LEVELS):
            return self.unary()
        sym, ctor, right_assoc = _LEVELS[level]
        left = self.binary(level + 1)
        if right_assoc:
            if self.peek() == sym:
                self.take()
                return ctor(left, self.binary(level))
            return left
        while self.peek() == sym:
            self.take()
            left = ctor(left, self.binary(level + 1))
        return left

    def unary(self) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "X":
            self.take()
            return Next(self.unary())
        if tok == "F":
            self.take()
            return Eventually(self.unary())
        if tok == "G":
            self.take()
            return Globally(self.unary())
        if tok == "(":
            self.take()
            f = self.binary(0)
            if self.peek() != ")":
                raise LtlfSyntaxError("expected ')'", self.pos())
            self.take()
            return f
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if tok == "<eof>":
            raise LtlfSyntaxError("unexpected end of input", pos)
        if tok in _KEYWORDS or not (tok[0].isalpha() or tok[0] == "_"):
            raise LtlfSyntaxError(f"unexpected token {tok!r}", pos)
        self.take()
        if self.universe is not None and tok not in self.universe:
            raise UnknownAtomError(f"unknown proposition {tok!r} at offset {pos}")
        return Atom(tok)


def parse(text: str, universe: Iterable[str] | None = None) -> Formula:
    """Parse concrete syntax into a formula.

    Precedence from tightest to loosest: ``! X F G``, ``U``, ``&``, ``|``,
    ``->`` (right associative), ``<->``.  If ``universe`` is given every atom
    must belong to it.
    """
    uni = frozenset(universe) if universe is not None else None
    return _Parser(text, uni).parse()


_PRINT_UNARY = {Not: "!", Next: "X", WeakNext: "N", Eventually: "F", Globally: "G"}
_PRINT_BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->", Until: "U", Release: "R"}


def to_str(f: Formula) -> str:
    """Fully parenthesized rendering; ``parse(to_str(f)) == f`` for parser-level formulas."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, _UNARY):
        return f"({_PRINT_UNARY[type(f)]} {to_str(f.arg)})"
    return f"({to_str(f.left)} {_PRINT_BINARY[type(f)]} {to_str(f.right)})"


# --------------------------------------------------------------------------
# structural helpers

def propositions(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, _UNARY):
            stack.append(g.arg)
        elif isinstance(g, _BINARY):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def is_temporal_free(f: Formula) -> bool:
    if isinstance(f, _TEMPORAL):
        return False
    if isinstance(f, Not):
        return is_temporal_free(f.arg)
    if isinstance(f, _BINARY):
        return is_temporal_free(f.left) and is_temporal_free(f.right)
    return True


def conjoin(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms, eliminating ``->`` and ``<->``.

    Negated temporal operators are replaced by their finite-trace duals, so
    ``!X a`` becomes ``N !a`` (weak next) and ``!(a U b)`` becomes ``!a R !b``.
    """
    return _nnf(f, False)


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, TrueF):
        return FALSE if neg else TRUE
    if isinstance(f, FalseF):
        return TRUE if neg else FALSE
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, And):
        ctor = Or if neg else And
        return ctor(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Or):
        ctor = And if neg else Or
        return ctor(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Implies):
        # a -> b == !a | b
        if neg:
            return And(_nnf(f.left, False), _nnf(f.right, True))
        return Or(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Iff):
        a, na = _nnf(f.left, False), _nnf(f.left, True)
        b, nb = _nnf(f.right, False), _nnf(f.right, True)
        if neg:
            return Or(And(a, nb), And(na, b))
        return Or(And(a, b), And(na, nb))
    if isinstance(f, Next):
        return WeakNext(_nnf(f.arg, True)) if neg else Next(_nnf(f.arg, False))
    if isinstance(f, WeakNext):
        return Next(_nnf(f.arg, True)) if neg else WeakNext(_nnf(f.arg, False))
    if isinstance(f, Until):
        if neg:
            return Release(_nnf(f.left, True), _nnf(f.right, True))
        return Until(_nnf(f.left, False), _nnf(f.right, False))
    if isinstance(f, Release):
        if neg:
            return Until(_nnf(f.left, True), _nnf(f.right, True))
        return Release(_nnf(f.left, False), _nnf(f.right, False))
    if isinstance(f, Eventually):
        return Globally(_nnf(f.arg, True)) if neg else Eventually(_nnf(f.arg, False))
    if isinstance(f, Globally):
        return Eventually(_nnf(f.arg, True)) if neg else Globally(_nnf(f.arg, False))
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# semantics

def eval_trace(f: Formula, trace: Sequence[Iterable[str]], i: int = 0) -> bool:
    """Decide ``trace, i |= f`` by the inductive finite-trace definition."""
    letters = [x if isinstance(x, (set, frozenset)) else frozenset(x) for x in trace]
    if not letters:
        raise ValueError("traces must be nonempty")
    if not 0 <= i < len(letters):
        raise IndexError(f"instant {i} outside trace of length {len(letters)}")
    return _holds(f, letters, i, len(letters) - 1)


def _holds(f: Formula, t: list, i: int, last: int) -> bool:
    if isinstance(f, Atom):
        return f.name in t[i]
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Not):
        return not _holds(f.arg, t, i, last)
    if isinstance(f, And):
        return _holds(f.left, t, i, last) and _holds(f.right, t, i, last)
    if isinstance(f, Or):
        return _holds(f.left, t, i, last) or _holds(f.right, t, i, last)
    if isinstance(f, Implies):
        return (not _holds(f.left, t, i, last)) or _holds(f.right, t, i, last)
    if isinstance(f, Iff):
        return _holds(f.left, t, i, last) == _holds(f.right, t, i, last)
    if isinstance(f, Next):
        return i < last and _holds(f.arg, t, i + 1, last)
    if isinstance(f, WeakNext):
        return i == last or _holds(f.arg, t, i + 1, last)
    if isinstance(f, Eventually):
        return any(_holds(f.arg, t, j, last) for j in range(i, last + 1))
    if isinstance(f, Globally):
        return all(_holds(f.arg, t, j, last) for j in range(i, last + 1))
    if isinstance(f, Until):
        for j in range(i, last + 1):
            if _holds(f.right, t, j, last):
                return True
            if not _holds(f.left, t, j, last):
                return False
        return False
    if isinstance(f, Release):
        # a R b == !(!a U !b)
        for j in range(i, last + 1):
            if not _holds(f.right, t, j, last):
                return False
            if _holds(f.left, t, j, last):
                return True
        return True
    raise TypeError(f"not a formula: {f!r}")


def eval_assignment(f: Formula, letter: Iterable[str]) -> bool:
    """Propositional truth of a temporal-free formula under one letter."""
    if not is_temporal_free(f):
        raise TemporalOperatorError(f"temporal operator in propositional context: {to_str(f)}")
    a = letter if isinstance(letter, (set, frozenset)) else frozenset(letter)
    return _holds(f, [a], 0, 0)


def eval_words(f: Formula, words: np.ndarray, props: Sequence[str]) -> np.ndarray:
    """Truth of ``f`` at instant 0 for a batch of equal-length words.

    ``words`` is an integer array of shape ``(n_words, length)`` whose entries
    are letter bitmasks over ``props`` (bit ``j`` set iff ``props[j]`` holds).
    The operators are evaluated with their quantifier definitions over whole
    columns, which makes exhaustive word enumeration cheap.
    """
    words = np.asarray(words)
    if words.ndim != 2 or words.shape[1] == 0:
        raise ValueError("expected a (n_words, length>=1) array")
    index = {p: j for j, p in enumerate(props)}
    return _columns(f, words, index)[:, 0]


def _columns(f: Formula, w: np.ndarray, index: dict) -> np.ndarray:
    n, length = w.shape
    if isinstance(f, Atom):
        if f.name not in index:
            return np.zeros((n, length), dtype=bool)
        return ((w >> index[f.name]) & 1).astype(bool)
    if isinstance(f, TrueF):
        return np.ones((n, length), dtype=bool)
    if isinstance(f, FalseF):
        return np.zeros((n, length), dtype=bool)
    if isinstance(f, Not):
        return ~_columns(f.arg, w, index)
    if isinstance(f, _BINARY):
        a = _columns(f.left, w, index)
        b = _columns(f.right, w, index)
        if isinstance(f, And):
            return a & b
        if isinstance(f, Or):
            return a | b
        if isinstance(f, Implies):
            return ~a | b
        if isinstance(f, Iff):
            return a == b
        out = np.zeros((n, length), dtype=bool)
        for i in range(length):
            if isinstance(f, Until):
                # exists j >= i with b at j and a on [i, j)
                prefix = np.ones(n, dtype=bool)
                acc = np.zeros(n, dtype=bool)
                for j in range(i, length):
                    acc |= prefix & b[:, j]
                    prefix &= a[:, j]
                out[:, i] = acc
            else:
                # Release: for all j >= i, b at j or a somewhere on [i, j)
                seen = np.zeros(n, dtype=bool)
                acc = np.ones(n, dtype=bool)
                for j in range(i, length):
                    acc &= seen | b[:, j]
                    seen |= a[:, j]
                out[:, i] = acc
        return out
    a = _columns(f.arg, w, index)
    out = np.zeros((n, length), dtype=bool)
    if isinstance(f, Next):
        out[:, :-1] = a[:, 1:]
    elif isinstance(f, WeakNext):
        out[:, :-1] = a[:, 1:]
        out[:, -1] = True
    elif isinstance(f, Eventually):
        for i in range(length):
            out[:, i] = a[:, i:].any(axis=1)
    elif isinstance(f, Globally):
        for i in range(length):
            out[:, i] = a[:, i:].all(axis=1)
    else:
        raise TypeError(f"not a formula: {f!r}")
    return out


# --------------------------------------------------------------------------
# random formulas for tests and benchmarks

def random_formula(rng, depth: int, props: Sequence[str], temporal: bool = True) -> Formula:
    """Draw a random parser-level formula of nesting depth at most ``depth``.

    ``rng`` is a :class:`random.Random` (or anything with ``random``/``choice``).
    """
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.08:
            return TRUE
        if r < 0.16:
            return FALSE
        return Atom(rng.choice(list(props)))
    unary = [Not] + ([Next, Eventually, Globally] if temporal else [])
    binary = [And, Or, Implies, Iff] + ([Until] if temporal else [])
    if rng.random() < 0.4:
        return rng.choice(unary)(random_formula(rng, depth - 1, props, temporal))
    ctor = rng.choice(binary)
    return ctor(random_formula(rng, depth - 1, props, temporal),
                random_formula(rng, depth - 1, props, temporal))
