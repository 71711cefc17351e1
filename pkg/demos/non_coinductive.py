"""
Two bisimulations whose union is not one
========================================

In this net s2 and s3 each enable an a-move on their own, but each also
inhibits the other's move.  Relating s2 to s2 works, relating s2 to s3 works,
doing both at once does not.
"""

from ptiplace import decide_equiv, is_pti_place_bisimulation, load_fixture, maximal_bisimulations
from ptiplace.io import fixture_path, format_relation, load_relation
from ptiplace.oracles import definition_pair_violation

net = load_fixture("fig4")
r1 = load_relation(fixture_path("fig4-r1.rel"), net)
r2 = load_relation(fixture_path("fig4-r2.rel"), net)
union = r1 | r2

for name, r in (("R1", r1), ("R2", r2), ("R1 | R2", union)):
    cx = is_pti_place_bisimulation(net, r)
    print(f"{name:8s}", "bisimulation" if cx is None else "not a bisimulation: " + cx.describe(net))

# the same failure seen directly on a pair of markings
print("2*s2 vs s2 + s3:", definition_pair_violation(net, union, net.marking("2*s2"), net.marking("s2 + s3")))

print()
for i, r in enumerate(maximal_bisimulations(net).relations, 1):
    print(f"maximal bisimulation {i}:")
    print(format_relation(r, net))

v = decide_equiv(net, net.marking("s2"), net.marking("s3"))
print("s2 and s3 bisimilar:", v.status, "after", v.relations_examined, "search nodes")
