"""Randomized closure laws shared by the unit and acceptance suites.

Each law takes a ``random.Random`` and returns a failure description or None.
"""

from ptiplace import (
    Multiset,
    PlaceRelation,
    closure_member,
    related_markings,
    relation_compose,
    relation_inverse,
)
from ptiplace.closure import in_closure


def rand_relation(rng, n, density=None):
    d = rng.random() if density is None else density
    return PlaceRelation(n, [(i, j) for i in range(n) for j in range(n) if rng.random() < d])


def rand_marking(rng, n, k):
    return Multiset.of(*(rng.randrange(n) for _ in range(k)))


def rand_related(rng, r, k):
    """A marking pair in the closure of ``r`` built token by token, or None."""
    pairs = list(r)
    if not pairs:
        return (Multiset(), Multiset()) if k == 0 else None
    picks = [rng.choice(pairs) for _ in range(k)]
    return Multiset.of(*(a for a, _ in picks)), Multiset.of(*(b for _, b in picks))


def _equivalence(rng, n):
    cls = [rng.randrange(n) for _ in range(n)]
    return PlaceRelation(n, [(i, j) for i in range(n) for j in range(n) if cls[i] == cls[j]])


def monotone(rng):
    n = rng.randint(1, 5)
    r1 = rand_relation(rng, n)
    r2 = r1 | rand_relation(rng, n)
    k = rng.randint(0, 6)
    m1, m2 = rand_marking(rng, n, k), rand_marking(rng, n, k)
    if in_closure(r1, m1, m2) and not in_closure(r2, m1, m2):
        return f"{r1} <= {r2} but ({m1}, {m2}) lost"
    return None


def additive(rng):
    n = rng.randint(1, 5)
    r = rand_relation(rng, n, 0.5)
    a = rand_related(rng, r, rng.randint(0, 4))
    b = rand_related(rng, r, rng.randint(0, 4))
    if a is None or b is None:
        return None
    if not in_closure(r, a[0] + b[0], a[1] + b[1]):
        return f"{r}: sum of {a} and {b} not related"
    return None


def equal_size(rng):
    n = rng.randint(1, 5)
    r = rand_relation(rng, n, 0.7)
    m1, m2 = rand_marking(rng, n, rng.randint(0, 6)), rand_marking(rng, n, rng.randint(0, 6))
    if in_closure(r, m1, m2) and m1.size != m2.size:
        return f"{r}: ({m1}, {m2}) related with different sizes"
    return None


def inverse(rng):
    n = rng.randint(1, 5)
    r = rand_relation(rng, n)
    k = rng.randint(0, 6)
    m1, m2 = rand_marking(rng, n, k), rand_marking(rng, n, k)
    if in_closure(r, m1, m2) != in_closure(relation_inverse(r), m2, m1):
        return f"{r}: inverse law fails on ({m1}, {m2})"
    return None


def composition(rng):
    n = rng.randint(1, 4)
    r1, r2 = rand_relation(rng, n), rand_relation(rng, n)
    k = rng.randint(0, 4)
    m1, m3 = rand_marking(rng, n, k), rand_marking(rng, n, k)
    lhs = in_closure(relation_compose(r1, r2), m1, m3)
    rhs = any(in_closure(r2, m2, m3) for m2 in related_markings(r1, m1))
    if lhs != rhs:
        return f"composition law fails for {r1}, {r2} on ({m1}, {m3})"
    return None


def subtractive_for_equivalences(rng):
    n = rng.randint(1, 5)
    r = _equivalence(rng, n)
    big = rand_related(rng, r, rng.randint(0, 6))
    small = rand_related(rng, r, rng.randint(0, 3))
    m1, m2 = big
    s1, s2 = small
    if not (s1 <= m1 and s2 <= m2):
        return None
    if not in_closure(r, m1 - s1, m2 - s2):
        return f"{r}: ({m1}, {m2}) minus ({s1}, {s2}) not related"
    return None


LAWS = {
    "monotonicity": monotone,
    "additivity": additive,
    "equal-size necessity": equal_size,
    "inverse law": inverse,
    "composition law": composition,
    "subtractivity for equivalences": subtractive_for_equivalences,
}


def non_subtractive_witness():
    """The relation {(s1,s3),(s1,s4),(s2,s4)} on places s1..s4 (indices 0..3)."""
    r = PlaceRelation(4, [(0, 2), (0, 3), (1, 3)])
    whole = (Multiset.of(0, 1), Multiset.of(2, 3))
    part = (Multiset.of(0), Multiset.of(3))
    rest = (whole[0] - part[0], whole[1] - part[1])
    return r, whole, part, rest, closure_member(r, *whole), closure_member(r, *part), closure_member(r, *rest)
