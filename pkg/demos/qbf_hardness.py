# Quantified formulas become target-mapping instances, and truth becomes realizability.

from mbsd import oracle, qbf
from mbsd.reductions import solve_mbsd

q = qbf.parse_qdimacs(qbf.WORKED_EXAMPLE_QDIMACS)
print(q, "->", qbf.eval_qbf(q))

p = qbf.qbf1_to_mbsd(q)
for phi, psi in p.mapping.conjuncts:
    print("  F", phi, " ->  F", psi)
print("realizable:", solve_mbsd(p).realizable, " oracle:", oracle.oracle_mbsd(p))

# any CNF first goes through the one-universal-per-clause rewrite
g = qbf.random_qbf(5, n_vars=4, n_clauses=3)
g1 = qbf.cnf_to_cnf1(g)
print(g, "->", qbf.eval_qbf(g))
print(g1, "->", qbf.eval_qbf(g1))
print("realizable:", solve_mbsd(qbf.qbf1_to_mbsd(g1)).realizable)

agree = sum(qbf.eval_qbf(x) == solve_mbsd(qbf.qbf1_to_mbsd(x)).realizable
            for x in (qbf.random_cnf1(s, 2, 3) for s in range(50)))
print("agreement on 50 random formulas:", agree)
