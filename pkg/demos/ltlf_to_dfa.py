# From formulas to automata, and back to traces.

from mbsd import automata, ltlf

f = ltlf.parse("G (req -> X F ack)")
print("formula:", ltlf.to_str(f))

d = automata.build_dfa(f, ["ack", "req"])
m = automata.minimize(d)
print("progression states:", d.n_states, " minimal:", m.n_states)

# a request on the last letter can never be acknowledged
for w in ([{"req"}, {"ack"}], [{"req"}], [set(), {"req", "ack"}, {"ack"}]):
    print(w, automata.accepts(m, w), ltlf.eval_trace(f, w))

# strong next needs a letter after the current one
x = automata.build_dfa(ltlf.parse("X true"), ["p"], minimal=True)
print("X true states:", x.n_states, " accepting:", sorted(x.accepting))

print(automata.to_dot(m))
