"""
Token game and processes of a small inhibitor net
=================================================

Two tokens, three transitions, one inhibitor arc: t2 may only fire while s2
is empty.  The same transitions fired in different orders give the same
causal net but different before/after inhibitor arcs.
"""

from ptiplace import enabled_transitions, fire_sequence, load_fixture, reachable_bounded
from ptiplace.causal import process_of_sequence, validate
from ptiplace.dot import process_to_dot

net = load_fixture("fig1")
m0 = net.marking("m0")
print("initial marking:", net.format_marking(m0))
print("enabled:", [net.transitions[t].name for t in enabled_transitions(net, m0)])

# once t1 has put a token on s2, t2 has to wait for t3
m = fire_sequence(net, m0, ["t1"])
print("after t1:", net.format_marking(m), "enabled:", [net.transitions[t].name for t in enabled_transitions(net, m)])

reach = reachable_bounded(net, m0, 100, 10)
print(len(reach.markings), "reachable markings")
for mk in reach.markings:
    print("  ", net.format_marking(mk), "via", [net.transitions[t].name for t in reach.path_to(mk)])

for seq in (["t1", "t3", "t2"], ["t2", "t1", "t3"]):
    p = process_of_sequence(net, m0, seq)
    assert validate(p, m0) == []
    print()
    print(" ".join(seq), "ends in", net.format_marking(p.final_marking))
    print(process_to_dot(p, "_".join(seq)))
