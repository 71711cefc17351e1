"""Place relations and their additive closure on markings.

A pair of markings ``(m1, m2)`` belongs to the additive closure of a place
relation R when the tokens of ``m1`` can be paired one-to-one with the tokens
of ``m2`` so that every pair of places is in R.  Membership is a perfect
matching problem on the token-level bipartite graph.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations_with_replacement, product
from typing import Iterable, Iterator, Sequence

from ptiplace.net import Multiset

INF = float("inf")


class PlaceRelation:
    """A relation over the places ``0..n-1`` stored as a bit matrix.

    The matrix lives in a Python int: pair ``(i, j)`` is bit ``i * n + j``,
    so iteration is row-major and subset tests are single bit operations.
    """

    __slots__ = ("n", "bits")

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]] = (), *, bits: int | None = None):
        self.n = n
        if bits is None:
            bits = 0
            for i, j in pairs:
                if not (0 <= i < n and 0 <= j < n):
                    raise ValueError(f"pair ({i}, {j}) outside {n} places")
                bits |= 1 << (i * n + j)
        self.bits = bits

    @classmethod
    def from_names(cls, places: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "PlaceRelation":
        index = {s: i for i, s in enumerate(places)}
        return cls(len(places), ((index[a], index[b]) for a, b in pairs))

    @classmethod
    def full(cls, n: int) -> "PlaceRelation":
        return cls(n, bits=(1 << (n * n)) - 1)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        i, j = pair
        return bool(self.bits >> (i * self.n + j) & 1)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        bits, n = self.bits, self.n
        while bits:
            low = bits & -bits
            k = low.bit_length() - 1
            yield divmod(k, n)
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaceRelation) and self.n == other.n and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __le__(self, other: "PlaceRelation") -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "PlaceRelation") -> bool:
        return self <= other and self.bits != other.bits

    def __or__(self, other: "PlaceRelation") -> "PlaceRelation":
        return PlaceRelation(self.n, bits=self.bits | other.bits)

    def __and__(self, other: "PlaceRelation") -> "PlaceRelation":
        return PlaceRelation(self.n, bits=self.bits & other.bits)

    def __repr__(self) -> str:
        return f"PlaceRelation({self.n}, {sorted(self)})"

    def add(self, i: int, j: int) -> "PlaceRelation":
        return PlaceRelation(self.n, bits=self.bits | 1 << (i * self.n + j))

    def image(self, i: int) -> list[int]:
        row = self.bits >> (i * self.n) & ((1 << self.n) - 1)
        return [j for j in range(self.n) if row >> j & 1]

    def preimage(self, j: int) -> list[int]:
        return [i for i in range(self.n) if self.bits >> (i * self.n + j) & 1]

    def named(self, places: Sequence[str]) -> list[tuple[str, str]]:
        return [(places[i], places[j]) for i, j in self]

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Popcount first, then the ascending tuple of bit positions."""
        return (len(self), tuple(i * self.n + j for i, j in self))


def relation_identity(n: int) -> PlaceRelation:
    return PlaceRelation(n, ((i, i) for i in range(n)))


def relation_inverse(r: PlaceRelation) -> PlaceRelation:
    return PlaceRelation(r.n, ((j, i) for i, j in r))


def relation_compose(r1: PlaceRelation, r2: PlaceRelation) -> PlaceRelation:
    if r1.n != r2.n:
        raise ValueError("relations over different place sets")
    return PlaceRelation(r1.n, ((i, k) for i, j in r1 for k in r2.image(j)))


def relation_is_equivalence(r: PlaceRelation) -> bool:
    n = r.n
    if any((i, i) not in r for i in range(n)):
        return False
    if relation_inverse(r) != r:
        return False
    return relation_compose(r, r) <= r


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum matching of a bipartite graph.

    ``adj[u]`` lists the right vertices adjacent to left vertex ``u``.  Returns
    ``match`` with ``match[u]`` the right partner of ``u`` or -1.  Vertices are
    visited in index order, so the result is deterministic.
    """
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        # iterative augmenting-path search along the BFS layering
        stack = [(u, iter(adj[u]))]
        path = []
        while stack:
            x, it = stack[-1]
            for v in it:
                w = match_r[v]
                if w == -1:
                    path.append((x, v))
                    for a, b in path:
                        match_l[a] = b
                        match_r[b] = a
                    return True
                if dist[w] == dist[x] + 1:
                    path.append((x, v))
                    stack.append((w, iter(adj[w])))
                    break
            else:
                dist[x] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] == -1:
                dfs(u)
    return match_l


def _classes_witness(r: PlaceRelation, m1: Multiset, m2: Multiset) -> list[tuple[int, int]] | None:
    # r is an equivalence: compare token counts class by class
    n = r.n
    seen = [False] * n
    witness: list[tuple[int, int]] = []
    for i in range(n):
        if seen[i]:
            continue
        cls = r.image(i)
        for c in cls:
            seen[c] = True
        left = [p for p in cls for _ in range(m1.get(p, 0))]
        right = [p for p in cls for _ in range(m2.get(p, 0))]
        if len(left) != len(right):
            return None
        witness.extend(zip(left, right))
    witness.sort()
    return witness


def closure_member(r: PlaceRelation, m1: Multiset, m2: Multiset) -> list[tuple[int, int]] | None:
    """Return a witness that ``(m1, m2)`` is in the additive closure of ``r``.

    The witness is a sorted list of place pairs, one per token, whose left
    components add up to ``m1`` and right components to ``m2``.  Returns
    ``None`` when no such pairing exists.
    """
    if m1.size != m2.size:
        return None
    if relation_is_equivalence(r):
        return _classes_witness(r, m1, m2)
    return _matching_witness(r, m1, m2)


def _matching_witness(r: PlaceRelation, m1: Multiset, m2: Multiset) -> list[tuple[int, int]] | None:
    left = m1.tokens()
    right = m2.tokens()
    if len(left) != len(right):
        return None
    cols: dict[int, list[int]] = {}
    for v, p in enumerate(right):
        cols.setdefault(p, []).append(v)
    adj = []
    for p in left:
        row = [v for q in r.image(p) for v in cols.get(q, ())]
        if not row:
            return None
        adj.append(row)
    match = hopcroft_karp(adj, len(right))
    if any(v == -1 for v in match):
        return None
    return sorted((left[u], right[v]) for u, v in enumerate(match))


def in_closure(r: PlaceRelation, m1: Multiset, m2: Multiset) -> bool:
    return closure_member(r, m1, m2) is not None


def related_markings(r: PlaceRelation, m1: Multiset) -> Iterator[Multiset]:
    """Yield every distinct ``m2`` with ``(m1, m2)`` in the closure of ``r``.

    Markings come out ordered by their ascending token tuple.  Per place the
    tokens choose a multiset of images, which already removes the duplicates
    coming from permuting tokens of the same place.
    """
    choices = []
    for p, k in m1.items():
        img = r.image(p)
        if not img:
            return
        choices.append(list(combinations_with_replacement(img, k)))
    seen = set()
    for combo in product(*choices):
        m2 = Multiset.of(*(q for part in combo for q in part))
        seen.add(m2)
    yield from sorted(seen, key=Multiset.sort_key)
