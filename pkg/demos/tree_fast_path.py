# On tree-shaped domains the memory bits are not needed.
# Each node has one history, so the bits are a function of the node and the
# reachable counts coincide; the fast path simply never carries them, and its
# size bound is 2|S||T| whatever k is.

from mbsd.reductions import build_target_game, build_tree_game, random_instance, solve_tree_target

print(" k  |S||T|  tree nodes  memory-bit nodes  realizable")
for k in (1, 2, 4, 6, 8):
    p = random_instance(40 + k, "target", (6, 6), k=k, tree_like=True)
    st = p.domain_a.n_states * p.domain_b.n_states
    tree = build_tree_game(p)
    bits = build_target_game(p)
    ok = solve_tree_target(p) is not None
    print(f"{k:2d}  {st:6d}  {tree.n_nodes:10d}  {bits.n_nodes:16d}  {ok}")
