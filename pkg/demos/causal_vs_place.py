"""
Same causal nets, different place behaviour
===========================================

s1 and s1p both do an a and then a b, and the processes they generate are
the same.  Yet no place relation can match them: on the left the a-move
produces two different places, on the right two tokens on one place, and
doubling the marking tells them apart.
"""

from ptiplace import decide_equiv, load_fixture
from ptiplace.causal import cn_bisim_bounded, unfold

net = load_fixture("fig5")
M = net.marking

for m1, m2 in (("s1", "s1p"), ("s2", "s2p"), ("2*s2", "2*s2p")):
    place = decide_equiv(net, M(m1), M(m2)).status
    causal = cn_bisim_bounded(net, M(m1), M(m2), 6)
    print(f"{m1:5s} vs {m2:6s} place: {place:15s} causal game: {causal.status}")
    for step in causal.trace:
        who = "left" if step.side == 1 else "right"
        print(f"    {who} fires {step.attacker}, answer: {step.defender or 'none'}")

for m in ("s1", "s1p"):
    levels = unfold(net, M(m), 3)
    print(m, "processes by length:", [len(level) for level in levels], [p.transitions() for p in levels[-1]])
