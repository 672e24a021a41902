import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbsd import domains, ltlf
from mbsd.domains import DomainError, DynamicDomain


def test_single_self_loop_is_valid():
    domains.validate(DynamicDomain.build([set()], [(0, 0)]))


def test_non_serial_state_is_named():
    d = DynamicDomain.build([set(), set()], [(0, 1)])
    with pytest.raises(DomainError) as err:
        domains.validate(d)
    assert "'s1'" in str(err.value) and "serial" in str(err.value)


def test_label_outside_props():
    d = DynamicDomain.build([{"q"}], [(0, 0)], props={"p"})
    with pytest.raises(DomainError, match="outside"):
        domains.validate(d)


def test_several_problems_reported_together():
    d = DynamicDomain(frozenset(), ("x", "x"), 5, ((0, 9),), (frozenset(), frozenset()))
    with pytest.raises(DomainError) as err:
        domains.validate(d)
    assert len(err.value.problems) >= 3


def test_is_trace():
    d = DynamicDomain.build([set(), set()], [(0, 1), (1, 1)])
    assert domains.is_trace(d, [0])
    assert domains.is_trace(d, [0, 1, 1])
    assert not domains.is_trace(d, [0, 0])
    with pytest.raises(ValueError):
        domains.is_trace(d, [0, 7])


def test_tree_like_examples():
    chain = DynamicDomain.build([set()] * 3, [(0, 1), (1, 2), (2, 2)])
    assert domains.is_tree_like(chain)
    diamond = DynamicDomain.build([set()] * 4, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 3)])
    assert not domains.is_tree_like(diamond)
    loop_and_edge = DynamicDomain.build([set()] * 2, [(0, 0), (0, 1), (1, 1)])
    assert not domains.is_tree_like(loop_and_edge)
    back_edge = DynamicDomain.build([set()] * 2, [(0, 1), (1, 0)])
    assert not domains.is_tree_like(back_edge)


def test_traces_enumeration():
    d = DynamicDomain.build([set()] * 2, [(0, 0), (0, 1), (1, 1)])
    assert list(domains.traces(d, 3)) == [(0, 0, 0), (0, 0, 1), (0, 1, 1)]
    assert list(domains.traces(d, 0)) == []
    assert all(domains.is_trace(d, t) for t in domains.traces(d, 5))


# -- generators -------------------------------------------------------------

def test_pacman_2x2_counts():
    # 4 positions times candy subsets of the 3 other cells, before pruning
    assert domains.pacman_state_estimate(2) == 32
    g, pm, m = domains.gen_pacman(2)
    assert g.n_states == 4
    assert pm.n_states == 18
    assert m.k == 4
    domains.validate(g)
    domains.validate(pm)


def test_pacman_3x3_shape():
    g, pm, m = domains.gen_pacman(3)
    assert m.k == 9
    assert g.n_states == 9 and pm.n_states == 578
    assert g.labels[g.init] == {"bk_1_1"}
    assert "p_0_0" in pm.labels[pm.init]
    assert "c_0_0" not in pm.labels[pm.init]


def test_pacman_invariants():
    _, pm, _ = domains.gen_pacman(3, walls=[(1, 2)])
    for lab in pm.labels:
        pos = [x for x in lab if x.startswith("p_")]
        assert len(pos) == 1
        assert "c_" + pos[0][2:] not in lab
        assert "p_1_2" not in lab and "c_1_2" not in lab
    for a, b in pm.edges:
        ca = {x for x in pm.labels[a] if x.startswith("c_")}
        cb = {x for x in pm.labels[b] if x.startswith("c_")}
        assert cb <= ca


def test_pacman_diagonal_ghosts():
    g, _, _ = domains.gen_pacman(3)
    gd, pm, m = domains.gen_pacman(3, diagonal_ghosts=True)
    centre = g.index("g1_1")
    assert len(g.succ[centre]) == 5
    assert len(gd.succ[gd.index("g1_1")]) == 9
    assert len(gd.succ[gd.index("g0_0")]) == 4


def test_pacman_parameter_errors():
    with pytest.raises(ValueError):
        domains.gen_pacman(1)
    with pytest.raises(ValueError):
        domains.gen_pacman(3, walls=[(0, 0)])
    with pytest.raises(ValueError):
        domains.gen_pacman(6, max_states=1000)


def test_pacman_two_ghosts_and_random_walls():
    g, pm, m = domains.gen_pacman(3, ghosts=2, walls=2, seed=4)
    assert g.labels[g.init] == {"bk_1_1", "pk_1_1"}
    assert m.k == 7
    assert domains.gen_pacman(3, ghosts=2, walls=2, seed=4)[1] == pm


def test_random_single_state():
    d = domains.gen_random(1, 1, 0, seed=3)
    assert d.n_states == 1 and d.edges == ((0, 0),) and d.labels == (frozenset(),)


def test_random_tree_like_and_deterministic():
    d = domains.gen_random(5, 2, 2, True, seed=7)
    assert domains.is_tree_like(d)
    assert domains.gen_random(5, 2, 2, True, seed=7) == d


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12), st.integers(1, 3), st.integers(0, 3), st.booleans(), st.integers(0, 10 ** 6))
def test_random_domains_valid(n, br, props, tree, seed):
    d = domains.gen_random(n, br, props, tree, seed)
    domains.validate(d)
    if tree:
        assert domains.is_tree_like(d)
        assert all(len([x for x in s if x != i]) <= br for i, s in enumerate(d.succ))


# -- JSON -------------------------------------------------------------------

def test_json_round_trip():
    d = domains.gen_random(6, 2, 3, seed=1)
    text = domains.dumps(d)
    back = domains.loads(text)
    assert domains.dumps(back) == text
    for s in range(d.n_states):
        t = back.index(d.ids[s])
        assert back.labels[t] == d.labels[s]
        assert {back.ids[x] for x in back.succ[t]} == {d.ids[x] for x in d.succ[s]}
    assert back.ids[back.init] == d.ids[d.init]


def _doc():
    return {"props": ["p"], "states": [{"id": "a", "label": ["p"]}, {"id": "b", "label": []}],
            "init": "a", "transitions": [["a", "b"], ["b", "b"]]}


@pytest.mark.parametrize("edit, needle", [
    (lambda d: d.pop("init"), "missing 'init'"),
    (lambda d: d["states"].append({"id": "a", "label": []}), "duplicate state id"),
    (lambda d: d.update(init="zz"), "initial state"),
    (lambda d: d["transitions"].append(["a", "b"]), "duplicate transition"),
    (lambda d: d["transitions"].append(["a", "q"]), "unknown state"),
    (lambda d: d["transitions"].pop(), "serial"),
])
def test_decode_errors(edit, needle):
    doc = _doc()
    edit(doc)
    with pytest.raises(DomainError, match=needle):
        domains.decode(doc)


def test_decode_rejects_bad_json():
    with pytest.raises(DomainError):
        domains.loads("{not json")


def test_pacman_mapping_reads_as_collision_avoidance():
    g, pm, m = domains.gen_pacman(2)
    inv = m.invariant()
    for s, t in itertools.product(range(g.n_states), range(pm.n_states)):
        gcell = {x[3:] for x in g.labels[s]}
        pcell = {x[2:] for x in pm.labels[t] if x.startswith("p_")}
        expect = not (gcell & pcell)
        assert ltlf.eval_assignment(inv, g.labels[s] | pm.labels[t]) == expect
