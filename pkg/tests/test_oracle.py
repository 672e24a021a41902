import itertools
import subprocess
import sys

import pytest

from mbsd import games, oracle
from mbsd.domains import DynamicDomain
from mbsd.games import REACH, SAFE, GameArena, WinningObjective
from mbsd.ltlf import eval_trace, parse
from mbsd.mapping import GENERAL, POINTWISE, TARGET, MappingSpec
from mbsd.oracle import _step
from mbsd.reductions import MbsdInstance, random_instance, solve_mbsd


def test_oracle_is_independent_of_the_solvers():
    code = ("import sys, mbsd.oracle; "
            "bad = [m for m in sys.modules if m.startswith(('mbsd.reductions', 'mbsd.automata'))]; "
            "print(bad)")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "[]"


# -- min-max ----------------------------------------------------------------

def test_reach_from_goal():
    a = GameArena(((0,),), ((0,),))
    v = oracle.minmax_decide(a, WinningObjective(REACH, frozenset({0})), 4)
    assert v.winner == "P2" and v.depth_used == 0


def test_safe_forced_exit():
    a = GameArena(((0,), (0,)), ((1,),))
    v = oracle.minmax_decide(a, WinningObjective(SAFE, frozenset({0})), 4)
    assert v.winner == "P1" and v.depth_used == 2


def test_bounded_flag():
    a, g = games.random_arena(1, 20)
    w = WinningObjective(SAFE, g)
    assert oracle.minmax_decide(a, w, 3).bounded
    assert not oracle.minmax_decide(a, w, 2 * (a.n_u + a.n_v)).bounded
    with pytest.raises(ValueError):
        oracle.minmax_decide(a, w, 0)


@pytest.mark.parametrize("seed", range(200))
def test_minmax_matches_attractor_30(seed):
    a, g = games.random_arena(seed, 30)
    bound = 2 * (a.n_u + a.n_v)
    for kind in (SAFE, REACH):
        w = WinningObjective(kind, g)
        assert (games.solve(a, w) is not None) == (oracle.minmax_decide(a, w, bound).winner == "P2")


# -- history search ---------------------------------------------------------

def loop(label=(), props=()):
    return DynamicDomain.build([set(label)], [(0, 0)], props=set(props) | set(label))


def test_true_mapping():
    for stop in "AB":
        p = MbsdInstance(loop(props={"a"}), loop(props={"b"}), MappingSpec.general("true"), stop)
        assert oracle.oracle_mbsd(p, horizon=4)


def test_vacuous_target():
    p = MbsdInstance(loop(props={"a"}), loop(props={"b"}), MappingSpec.target([("a", "b")]), "B")
    assert oracle.oracle_mbsd(p)


def test_general_needs_horizon_or_dfa_size():
    p = MbsdInstance(loop(props={"a"}), loop(props={"b"}), MappingSpec.general("F a"), "B")
    with pytest.raises(ValueError):
        oracle.oracle_mbsd(p)
    assert not oracle.oracle_mbsd(p, dfa_states=2)


def test_node_cap():
    p = MbsdInstance(loop(props={"a"}), loop(props={"b"}), MappingSpec.general("true"), "A")
    with pytest.raises(oracle.OracleCapError):
        oracle.oracle_mbsd(p, horizon=40, node_cap=1)


@pytest.mark.parametrize("text", ["F a", "G (a -> X b)", "a U b", "!X a", "F a <-> G b", "X X a"])
def test_naive_step_is_sound(text):
    f = parse(text)
    letters = [frozenset(x) for x in ([], ["a"], ["b"], ["a", "b"])]
    for n in range(2, 5):
        for w in itertools.product(letters, repeat=n):
            assert eval_trace(f, list(w)) == eval_trace(_step(f, w[0]), list(w[1:]))


@pytest.mark.parametrize("seed", range(100))
def test_oracle_matches_solver(seed):
    kind = (POINTWISE, TARGET, GENERAL)[seed % 3]
    p = random_instance(seed, kind, (3, 3), k=2)
    res = solve_mbsd(p, GENERAL)
    dfa = res.stats["dfa_states"]
    assert oracle.oracle_mbsd(p, dfa_states=dfa) == res.realizable
