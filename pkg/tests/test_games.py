import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbsd import games, oracle
from mbsd.games import REACH, SAFE, ArenaError, GameArena, PositionalStrategy, WinningObjective


def test_safety_echo():
    a = GameArena(((0,),), ((0,),))
    s = games.solve_safety(a, {0})
    assert s.moves == {0: 0}
    assert games.verify_strategy(a, WinningObjective(SAFE, frozenset({0})), s)


def test_safety_init_outside_goal():
    a = GameArena(((0,),), ((0,),))
    assert games.solve_safety(a, set()) is None


def test_reach_init_in_goal():
    a = GameArena(((0,),), ((0,),))
    assert games.solve_reachability(a, {0}).moves == {}


def test_reach_unreachable_goal():
    a = GameArena(((0,), (1,)), ((0,), (1,)))
    assert games.solve_reachability(a, {1}) is None


def test_reach_prefers_lowest_index():
    # v0 can go to u1 or u2, both goal
    a = GameArena(((0,), (0,), (0,)), ((1, 2),))
    assert games.solve_reachability(a, {1, 2}).moves == {0: 1}


def test_safety_needs_p2_choice():
    # u0 -> v0, v0 -> {u1 (bad), u0}
    a = GameArena(((0,), (0,)), ((0, 1),))
    s = games.solve_safety(a, {0})
    assert s.moves == {0: 0}
    bad = PositionalStrategy({0: 1})
    assert not games.verify_strategy(a, WinningObjective(SAFE, frozenset({0})), bad)


def test_reach_cycle_rejected():
    a = GameArena(((0,), (0,)), ((0, 1),))
    w = WinningObjective(REACH, frozenset({1}))
    assert games.verify_strategy(a, w, PositionalStrategy({0: 1}))
    assert not games.verify_strategy(a, w, PositionalStrategy({0: 0}))


def test_verify_rejects_illegal_and_unknown_moves():
    a = GameArena(((0,), (0,)), ((0,),))
    w = WinningObjective(SAFE, frozenset({0, 1}))
    assert not games.verify_strategy(a, w, PositionalStrategy({0: 1}))
    with pytest.raises(ArenaError):
        games.verify_strategy(a, w, PositionalStrategy({5: 0}))


def test_arena_validation():
    with pytest.raises(ArenaError):
        GameArena(((3,),), ((0,),))
    with pytest.raises(ArenaError):
        GameArena(((0,),), ((),))
    with pytest.raises(ArenaError):
        GameArena(((0,),), ((0,),), init=4)
    # unreachable deadlocks are fine
    GameArena(((0,), ()), ((0,),))
    with pytest.raises(ArenaError):
        games.solve_safety(GameArena(((0,),), ((0,),)), {7})
    with pytest.raises(ValueError):
        WinningObjective("buchi", frozenset())


def test_from_edges_and_counts():
    a = GameArena.from_edges(2, 1, [(0, 0), (1, 0)], [(0, 1), (0, 0)])
    assert a.p1_succ == ((0,), (0,)) and a.p2_succ == ((0, 1),)
    assert a.n_edges == 4
    assert a.reachable() == ({0, 1}, {0})


def test_attractor_ranks_and_edge_count():
    # chain u0 -> v0 -> u1 -> v1 -> u2(goal)
    a = GameArena(((0,), (1,), (1,)), ((1,), (2,)))
    attr = games.attractor(a, {2}, player=2)
    assert attr.u_rank == [4, 2, 0]
    assert attr.v_rank == [3, 1]
    assert attr.edge_visits <= a.n_edges
    with pytest.raises(ValueError):
        games.attractor(a, {2}, 3)


@pytest.mark.parametrize("seed", range(20))
def test_random_20_matches_minmax(seed):
    a, g = games.random_arena(seed, 20)
    for kind in (SAFE, REACH):
        w = WinningObjective(kind, g)
        s = games.solve(a, w)
        verdict = oracle.minmax_decide(a, w, 2 * (a.n_u + a.n_v))
        assert (s is not None) == (verdict.winner == "P2")
        if s is not None:
            assert games.verify_strategy(a, w, s)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 40), st.integers(1, 4), st.floats(0, 1))
def test_solver_output_verifies(seed, n, out, ratio):
    a, g = games.random_arena(seed, n, out, ratio)
    for kind in (SAFE, REACH):
        w = WinningObjective(kind, g)
        s = games.solve(a, w)
        if s is not None:
            assert games.verify_strategy(a, w, s)


def test_safety_and_reach_duality():
    # P2 wins Safe(g) iff P1 does not win Reach-for-P1 of the complement
    for seed in range(50):
        a, g = games.random_arena(seed, 30)
        bad = set(range(a.n_u)) - g
        p1 = games.attractor(a, bad, 1)
        assert (games.solve_safety(a, g) is None) == p1.has_u(a.init)


def test_to_dot():
    a = GameArena(((0,),), ((0,),))
    dot = games.to_dot(a, {0}, PositionalStrategy({0: 0}))
    assert "u0 -> v0" in dot and "v0 -> u0 [style=bold]" in dot
