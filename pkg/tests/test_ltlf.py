import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbsd import ltlf
from mbsd.ltlf import (
    FALSE, TRUE, And, Atom, Eventually, Globally, Iff, Implies, Next, Not, Or, Release,
    Until, WeakNext,
)

a, b, g, p, q = (Atom(x) for x in "abgpq")
PROPS = ("a", "b", "c")


# -- strategies -------------------------------------------------------------

def formulas(depth=4, props=PROPS, temporal=True):
    leaves = st.sampled_from([TRUE, FALSE] + [Atom(x) for x in props])
    unary = [Not] + ([Next, Eventually, Globally] if temporal else [])
    binary = [And, Or, Implies, Iff] + ([Until] if temporal else [])

    def extend(children):
        return st.one_of(
            st.builds(lambda c, x: c(x), st.sampled_from(unary), children),
            st.builds(lambda c, x, y: c(x, y), st.sampled_from(binary), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=2 ** depth)


letters = st.frozensets(st.sampled_from(PROPS))
traces = st.lists(letters, min_size=1, max_size=6)


# -- parser -----------------------------------------------------------------

def test_parse_globally_implication():
    assert ltlf.parse("G (g -> !p)") == Globally(Implies(g, Not(p)))


def test_parse_target_shape():
    assert ltlf.parse("F a -> F b") == Implies(Eventually(a), Eventually(b))


def test_parse_incomplete_until_reports_offset():
    with pytest.raises(ltlf.LtlfSyntaxError) as err:
        ltlf.parse("a U")
    assert err.value.position == 3
    assert "offset 3" in str(err.value)


@pytest.mark.parametrize("text, expected", [
    ("a & b | q", Or(And(a, b), q)),
    ("a -> b -> q", Implies(a, Implies(b, q))),
    ("a <-> b <-> q", Iff(Iff(a, b), q)),
    ("a U b U q", Until(a, Until(b, q))),
    ("!a U b", Until(Not(a), b)),
    ("X F a & b", And(Next(Eventually(a)), b)),
    ("a | b -> q", Implies(Or(a, b), q)),
    ("(a | b) & q", And(Or(a, b), q)),
    ("true & false", And(TRUE, FALSE)),
])
def test_precedence(text, expected):
    assert ltlf.parse(text) == expected


@pytest.mark.parametrize("text", ["", "(a", "a)", "a b", "& a", "G", "U a", "a -> ", "1a", "a # b"])
def test_syntax_errors(text):
    with pytest.raises(ltlf.LtlfSyntaxError):
        ltlf.parse(text)


def test_universe_rejects_unknown_atom():
    with pytest.raises(ltlf.UnknownAtomError):
        ltlf.parse("a & z", universe={"a"})
    assert ltlf.parse("a", universe={"a"}) == a


def test_keywords_are_not_atoms():
    with pytest.raises(ltlf.LtlfSyntaxError):
        ltlf.parse("X")
    assert ltlf.parse("Xa") == Atom("Xa")


@settings(max_examples=300, deadline=None)
@given(formulas(depth=5))
def test_parse_inverts_printer(f):
    assert ltlf.parse(ltlf.to_str(f)) == f


def test_parser_never_emits_weak_operators():
    rng = random.Random(3)
    for _ in range(200):
        f = ltlf.parse(ltlf.to_str(ltlf.random_formula(rng, 4, PROPS)))
        stack = [f]
        while stack:
            x = stack.pop()
            assert not isinstance(x, (WeakNext, Release))
            stack.extend(getattr(x, k) for k in ("arg", "left", "right") if hasattr(x, k))


# -- normal form ------------------------------------------------------------

def test_nnf_examples():
    assert ltlf.to_nnf(Not(Next(p))) == WeakNext(Not(p))
    assert ltlf.to_nnf(Not(Until(a, b))) == Release(Not(a), Not(b))
    assert ltlf.to_nnf(Globally(p)) == Globally(p)


def _nnf_ok(f):
    if isinstance(f, Not):
        return isinstance(f.arg, Atom)
    if isinstance(f, (Implies, Iff)):
        return False
    return all(_nnf_ok(getattr(f, k)) for k in ("arg", "left", "right") if hasattr(f, k))


@settings(max_examples=300, deadline=None)
@given(formulas(depth=5), traces)
def test_nnf_preserves_semantics(f, t):
    n = ltlf.to_nnf(f)
    assert _nnf_ok(n)
    assert ltlf.eval_trace(n, t) == ltlf.eval_trace(f, t)


# -- semantics --------------------------------------------------------------

def test_eval_examples():
    assert ltlf.eval_trace(Next(TRUE), [{"p"}]) is False
    assert ltlf.eval_trace(Eventually(p), [set(), {"p"}]) is True
    assert ltlf.eval_trace(Until(p, q), [{"p"}, {"p"}, {"q"}]) is True
    assert ltlf.eval_trace(Until(p, q), [{"p"}, set(), {"q"}]) is False
    assert ltlf.eval_trace(WeakNext(FALSE), [{"p"}]) is True


def test_eval_index_checks():
    with pytest.raises(IndexError):
        ltlf.eval_trace(p, [{"p"}], 1)
    with pytest.raises(ValueError):
        ltlf.eval_trace(p, [])


@settings(max_examples=200, deadline=None)
@given(formulas(depth=4), traces, st.integers(0, 5))
def test_derived_operators(f, t, i):
    i = min(i, len(t) - 1)
    assert ltlf.eval_trace(Eventually(f), t, i) == ltlf.eval_trace(Until(TRUE, f), t, i)
    assert ltlf.eval_trace(Globally(f), t, i) == ltlf.eval_trace(Not(Eventually(Not(f))), t, i)
    assert ltlf.eval_trace(Release(f, a), t, i) == ltlf.eval_trace(Not(Until(Not(f), Not(a))), t, i)


def test_eval_assignment():
    assert ltlf.eval_assignment(ltlf.parse("a & !b"), {"a"}) is True
    assert ltlf.eval_assignment(ltlf.parse("a -> b"), set()) is True
    with pytest.raises(ltlf.TemporalOperatorError):
        ltlf.eval_assignment(ltlf.parse("F a"), {"a"})


@settings(max_examples=200, deadline=None)
@given(formulas(depth=4, temporal=False), letters)
def test_assignment_matches_trace(f, x):
    assert ltlf.eval_assignment(f, x) == ltlf.eval_trace(f, [x])


def test_propositions():
    assert ltlf.propositions(TRUE) == frozenset()
    assert ltlf.propositions(ltlf.parse("a U b")) == {"a", "b"}
    assert ltlf.propositions(ltlf.parse("G(a -> a)")) == {"a"}


def test_eval_words_agrees_with_eval_trace():
    rng = random.Random(11)
    words = np.array(list(itertools.product(range(8), repeat=3)))
    for _ in range(60):
        f = ltlf.random_formula(rng, 4, PROPS)
        fast = ltlf.eval_words(f, words, PROPS)
        for w, v in zip(words, fast):
            t = [frozenset(PROPS[j] for j in range(3) if m >> j & 1) for m in w]
            assert bool(v) == ltlf.eval_trace(f, t)


def test_operator_sugar_and_str():
    assert (a & b) == And(a, b)
    assert (a | ~b) == Or(a, Not(b))
    assert str(Until(a, b)) == "(a U b)"
    assert ltlf.to_str(Not(a)) == "(! a)"
