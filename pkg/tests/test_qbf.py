import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbsd import ltlf, qbf
from mbsd.qbf import EXISTS, FORALL, QbfCnf, QbfError
from mbsd.reductions import solve_mbsd


def brute(q: QbfCnf) -> bool:
    """Truth by full expansion of the prefix, with no pruning."""
    def rec(i, val):
        if i == len(q.prefix):
            return all(any(val[abs(x)] == (x > 0) for x in c) for c in q.clauses)
        quant, v = q.prefix[i]
        vals = [rec(i + 1, {**val, v: b}) for b in (False, True)]
        return all(vals) if quant == FORALL else any(vals)
    return rec(0, {})


# -- parsing ----------------------------------------------------------------

def test_parse_single_existential():
    q = qbf.parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n")
    assert q.prefix == ((EXISTS, 1),) and q.clauses == ((1,),)


def test_parse_forall_exists():
    q = qbf.parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n-1 2 0\n")
    assert q.prefix == ((FORALL, 1), (EXISTS, 2))
    assert q.clauses == ((-1, 2),)
    assert q.is_cnf1() and q.is_strictly_alternating()


@pytest.mark.parametrize("text", [
    "p cnf 2 1\ne 1 2 0\n1 5 0\n",
    "e 1 0\n1 0\n",
    "p cnf x 1\n",
    "p cnf 1 1\ne 1 0\n1\n",
    "p cnf 1 2\ne 1 0\n1 0\n",
    "p cnf 2 1\ne 1 0\n1 2 0\n",
    "p cnf 1 1\ne 1 0\ne 1 0\n1 0\n",
    "p cnf 1 1\ne 1 0\n1 0\na 1 0\n",
])
def test_parse_errors(text):
    with pytest.raises(QbfError):
        qbf.parse_qdimacs(text)


def test_qdimacs_round_trip():
    q = qbf.parse_qdimacs(qbf.WORKED_EXAMPLE_QDIMACS)
    assert qbf.parse_qdimacs(q.to_qdimacs()) == q
    assert str(q) == "Ax1 Ex2 Ax3 Ex4 . (x1 | x2 | x4) & (!x3 | !x2) & (x2 | !x4)"


# -- evaluation -------------------------------------------------------------

def test_eval_small():
    assert qbf.eval_qbf(qbf.parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n"))
    assert not qbf.eval_qbf(qbf.parse_qdimacs("p cnf 1 1\na 1 0\n1 0\n"))


def test_worked_example_is_false():
    q = qbf.parse_qdimacs(qbf.WORKED_EXAMPLE_QDIMACS)
    assert q.is_cnf1() and q.is_strictly_alternating()
    assert brute(q) is False
    assert qbf.eval_qbf(q) is False


def test_eval_cap():
    prefix = tuple((EXISTS, v) for v in range(1, 24))
    with pytest.raises(QbfError):
        qbf.eval_qbf(QbfCnf(prefix, ((1,),)))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(0, 6))
def test_eval_matches_expansion(seed, n, m):
    q = qbf.random_qbf(seed, n, m)
    assert qbf.eval_qbf(q) == brute(q)


# -- CNF-1 transform --------------------------------------------------------

def test_transform_example():
    q = QbfCnf(((FORALL, 1), (EXISTS, 2)), ((1, 2),))
    t = qbf.cnf_to_cnf1(q)
    assert t.is_cnf1() and t.is_strictly_alternating()
    # z = 3 copies x = 1
    assert (3, 2) in t.clauses and (1, -3) in t.clauses and (-1, 3) in t.clauses
    assert qbf.eval_qbf(t) == qbf.eval_qbf(q) is True


def test_transform_without_universals_only_pads():
    q = QbfCnf(((EXISTS, 1), (EXISTS, 2)), ((1, -2),))
    t = qbf.cnf_to_cnf1(q)
    assert t.clauses == q.clauses
    assert [v for _, v in t.prefix if v <= 2] == [1, 2]
    assert t.is_strictly_alternating()


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(1, 5))
def test_transform_preserves_truth(seed, n, m):
    q = qbf.random_qbf(seed, n, m)
    t = qbf.cnf_to_cnf1(q)
    assert t.is_cnf1() and t.is_strictly_alternating()
    assert qbf.eval_qbf(t) == qbf.eval_qbf(q)


# -- gadget -----------------------------------------------------------------

def test_gadget_shape():
    d = qbf.gadget_domain("A", 2)
    assert d.n_states == 7
    assert d.labels[d.index("A_s3")] == {"pA_star"}
    assert d.succ[d.index("A_s3")] == (d.index("A_s3"),)
    assert set(d.succ[d.index("A_s1")]) == {d.index("A_s1T"), d.index("A_s1F")}
    assert d.labels[d.index("A_s2F")] == {"pA_2_F"}


def test_worked_example_mapping():
    q = qbf.parse_qdimacs(qbf.WORKED_EXAMPLE_QDIMACS)
    p = qbf.qbf1_to_mbsd(q)
    got = [(ltlf.propositions(a), ltlf.propositions(b)) for a, b in p.mapping.conjuncts]
    assert got == [
        ({"pA_1_F"}, {"pB_1_T", "pB_2_T"}),
        ({"pA_2_T"}, {"pB_1_F"}),
        ({"pA_star"}, {"pB_1_T", "pB_2_F"}),
        ({"pA_star"}, {"pB_star"}),
    ]
    assert p.stop_agent == "B"
    assert p.domain_a.n_states == p.domain_b.n_states == 7
    assert not solve_mbsd(p).realizable


def test_single_clause_counts():
    q = QbfCnf(((FORALL, 1), (EXISTS, 2)), ((1, 2),))
    p = qbf.qbf1_to_mbsd(q)
    assert p.mapping.k == 2
    assert solve_mbsd(p).realizable


def test_reduction_rejects_bad_shapes():
    with pytest.raises(QbfError):
        qbf.qbf1_to_mbsd(QbfCnf(((EXISTS, 1), (FORALL, 2)), ((1,),)))
    with pytest.raises(QbfError):
        qbf.qbf1_to_mbsd(QbfCnf(((FORALL, 1), (EXISTS, 2), (FORALL, 3), (EXISTS, 4)), ((1, 3),)))


def test_unanchored_gadget_is_always_realizable():
    # without the start label B wins by stopping at once
    q = qbf.parse_qdimacs(qbf.WORKED_EXAMPLE_QDIMACS)
    assert solve_mbsd(qbf.qbf1_to_mbsd(q, anchor_star=False)).realizable


@pytest.mark.parametrize("seed", range(40))
def test_reduction_matches_truth(seed):
    q = qbf.random_cnf1(seed, n=1 + seed % 3, n_clauses=1 + seed % 4)
    assert solve_mbsd(qbf.qbf1_to_mbsd(q)).realizable == qbf.eval_qbf(q)


def test_random_cnf1_shapes():
    for seed, n in itertools.product(range(20), (1, 2, 3)):
        q = qbf.random_cnf1(seed, n, 4)
        assert q.is_cnf1() and q.is_strictly_alternating() and q.n_vars == 2 * n
