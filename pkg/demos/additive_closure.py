"""
Relating markings through a place relation
==========================================

A place relation R lifts to markings by pairing tokens one to one.  Finding
the pairing is a bipartite matching problem, so the check stays polynomial
even when trying all token orders would not.
"""

import random
import time

import numpy as np

from ptiplace import Multiset, PlaceRelation, closure_member, related_markings
from ptiplace.io import format_multiset
from ptiplace.oracles import closure_member_naive

places = ["s1", "s2", "s3", "s4"]
R = PlaceRelation.from_names(places, [("s1", "s3"), ("s1", "s4"), ("s2", "s4")])
m1 = Multiset.of(0, 1)  # s1 + s2

# the order of the right-hand tokens does not matter
print("s1+s2 ~ s4+s3:", closure_member(R, m1, Multiset.of(3, 2)))
print("markings related to s1+s2:", [format_multiset(m, places) for m in related_markings(R, m1)])

# not subtractive: (s1+s2, s3+s4) and (s1, s4) are related but (s2, s3) is not
print("residual s2 ~ s3:", closure_member(R, Multiset.of(1), Multiset.of(2)))

# matching against brute force, then how the matching scales
rng = random.Random(0)
n = 12
dense = PlaceRelation(n, [(i, j) for i in range(n) for j in range(n) if rng.random() < 0.6])
pairs = [
    (Multiset.of(*(rng.randrange(n) for _ in range(7))), Multiset.of(*(rng.randrange(n) for _ in range(7))))
    for _ in range(200)
]
agree = sum((closure_member(dense, a, b) is not None) == closure_member_naive(dense, a, b) for a, b in pairs)
print(f"agrees with trying all permutations on {agree}/{len(pairs)} random pairs")

sizes = np.array([25, 50, 100, 200, 400, 800])
times = []
for k in sizes:
    a = Multiset.of(*(rng.randrange(n) for _ in range(k)))
    b = Multiset.of(*(rng.randrange(n) for _ in range(k)))
    t0 = time.perf_counter()
    for _ in range(3):
        closure_member(dense, a, b)
    times.append((time.perf_counter() - t0) / 3)
times = np.array(times)
for k, t in zip(sizes, times):
    print(f"{k:5d} tokens  {t * 1000:8.2f} ms")
slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
print(f"empirical exponent {slope:.2f} (worst case k^2.5)")
