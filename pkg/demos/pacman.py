# Pac-Man on a 3x3 grid: keep away from one ghost for as long as it moves.

import collections

from mbsd import domains
from mbsd.reductions import MbsdInstance, simulate, solve_mbsd, verify_mbsd

ghost, pacman, mapping = domains.gen_pacman(3)
print("ghost states:", ghost.n_states, " pacman states:", pacman.n_states, " conjuncts:", mapping.k)

p = MbsdInstance(ghost, pacman, mapping, "A")
res = solve_mbsd(p)
print(res.to_json(with_time=True))

# the general reduction over the same mapping agrees
print("general mode:", solve_mbsd(p, "general").realizable)
print("verified:", verify_mbsd(p, res.strategy))

# random ghosts; the run ends whenever the ghost decides to stop
lengths = collections.Counter()
for seed in range(200):
    run = simulate(p, res.strategy, seed, 30)
    assert run.verdict
    lengths[len(run.states_a) // 10 * 10] += 1
print("run lengths by decade:", dict(sorted(lengths.items())))

run = simulate(p, res.strategy, 7, 6)
for s, t in zip(run.states_a, run.states_b):
    print(f"  ghost {ghost.ids[s]:8s} pacman {pacman.ids[t]}")
