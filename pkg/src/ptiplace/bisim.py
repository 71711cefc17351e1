"""Pti-place bisimulations: checking a relation and deciding bisimilarity.

A place relation R is checked with two finite conditions: for every
transition t1 that can fire from its own pre-set and every marking m related
to that pre-set by the additive closure of R, some transition t2 with pre-set
exactly m, the same label, R-related post-sets and the same inhibiting
behaviour on R-related places must exist; and symmetrically.

Deciding ``m1 ~ m2`` means finding any such R relating the two markings.
The default strategy is a complete backtracking search that only adds pairs
demanded by an unmet obligation.  The literal enumeration of all subsets of
S x S is kept as ``strategy="enumerate"`` for small nets.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from ptiplace.closure import (
    PlaceRelation,
    closure_member,
    in_closure,
    related_markings,
    relation_identity,
    relation_inverse,
)
from ptiplace.net import Multiset, PtiNet

MAX_ENUMERATED_PLACES = 5


@dataclass(frozen=True)
class BisimCounterexample:
    """A transition/marking pair for which the transfer condition fails.

    ``condition`` is 1 when the left side moves, 2 when the right side moves.
    ``subcondition`` names what every candidate answer lacked: ``"a"`` no
    firable transition has pre-set ``marking``; ``"b"`` none of those has
    the same label and related post-sets; ``"c"`` the remaining candidates
    all disagree on inhibiting places, ``pair`` is the first such
    disagreement for ``candidate``.
    """

    condition: int
    subcondition: str
    transition: int
    marking: Multiset
    candidate: int | None = None
    pair: tuple[int, int] | None = None

    def describe(self, net: PtiNet) -> str:
        t = net.transitions[self.transition].name
        m = net.format_marking(self.marking)
        text = f"condition {self.condition}({self.subcondition}): {t} matched against {m} has no answer"
        if self.pair is not None and self.candidate is not None:
            s, s2 = (net.places[p] for p in self.pair)
            text += f"; {net.transitions[self.candidate].name} disagrees on inhibiting pair ({s}, {s2})"
        return text


@dataclass
class Budget:
    """Limits for the exponential searches.

    ``max_nodes`` caps search nodes (candidate relations examined);
    ``None`` means unlimited.  ``exhaustive`` lifts the place-count guard of
    the enumeration strategy and the node cap.
    """

    max_nodes: int | None = 200_000
    max_seconds: float | None = None
    exhaustive: bool = False


@dataclass
class EquivVerdict:
    equivalent: bool | None  # None: budget exhausted before an answer
    witness: PlaceRelation | None = None
    witness_match: list[tuple[int, int]] | None = None
    relations_examined: int = 0
    pruned: int = 0

    @property
    def status(self) -> str:
        if self.equivalent is None:
            return "unknown"
        return "equivalent" if self.equivalent else "not-equivalent"


@dataclass
class MaximalBisimulations:
    relations: list[PlaceRelation]
    truncated: bool = False
    relations_examined: int = 0


class BudgetExhausted(Exception):
    pass


class _Tracker:
    def __init__(self, budget: Budget | None):
        budget = budget or Budget()
        self.max_nodes = None if budget.exhaustive else budget.max_nodes
        self.deadline = None if budget.max_seconds is None else time.monotonic() + budget.max_seconds
        self.nodes = 0
        self.pruned = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExhausted
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted


class BisimChecker:
    """Per-net precomputation shared by all bisimulation queries on it."""

    def __init__(self, net: PtiNet):
        self.net = net
        n = net.n_places
        self.n = n
        self.live = [i for i, t in enumerate(net.transitions) if not t.dead]
        self.by_pre: dict[Multiset, list[int]] = {}
        for i in self.live:
            self.by_pre.setdefault(net.transitions[i].pre, []).append(i)
        self._inhib = [sum(1 << p for p in t.inhib) for t in net.transitions]
        self._forbidden: dict[tuple[int, int], int] = {}
        self._memo: dict[int, BisimCounterexample | None] = {}

    def forbidden(self, t1: int, t2: int) -> int:
        """Bit mask of the pairs (s, s') on which t1 and t2 disagree about inhibition."""
        key = (t1, t2)
        mask = self._forbidden.get(key)
        if mask is None:
            n = self.n
            i1, i2 = self._inhib[t1], self._inhib[t2]
            full_row = (1 << n) - 1
            mask = 0
            for s in range(n):
                # row s: columns s' whose membership in inhib(t2) differs from s in inhib(t1)
                row = (~i2 & full_row) if i1 >> s & 1 else i2
                mask |= row << (s * n)
            self._forbidden[key] = mask
        return mask

    def inhibitor_consistent(self, r: PlaceRelation, t1: int, t2: int) -> tuple[int, int] | None:
        bad = r.bits & self.forbidden(t1, t2)
        if not bad:
            return None
        k = (bad & -bad).bit_length() - 1
        return divmod(k, self.n)

    def _condition(self, r: PlaceRelation, cond: int) -> BisimCounterexample | None:
        # condition 2 on R is condition 1 on the inverse relation
        net = self.net
        rel = r if cond == 1 else relation_inverse(r)
        for t1 in self.live:
            tr1 = net.transitions[t1]
            for m in related_markings(rel, tr1.pre):
                cands = self.by_pre.get(m, [])
                if not cands:
                    return BisimCounterexample(cond, "a", t1, m)
                first_bad = None
                for t2 in cands:
                    tr2 = net.transitions[t2]
                    if tr2.label != tr1.label or not in_closure(rel, tr1.post, tr2.post):
                        continue
                    bad = rel.bits & self.forbidden(t1, t2)
                    if not bad:
                        break
                    if first_bad is None:
                        k = (bad & -bad).bit_length() - 1
                        i, j = divmod(k, self.n)
                        first_bad = (t2, (i, j) if cond == 1 else (j, i))
                else:
                    if first_bad is None:
                        return BisimCounterexample(cond, "b", t1, m)
                    return BisimCounterexample(cond, "c", t1, m, first_bad[0], first_bad[1])
        return None

    def check(self, r: PlaceRelation) -> BisimCounterexample | None:
        if r.bits in self._memo:
            return self._memo[r.bits]
        result = self._condition(r, 1) or self._condition(r, 2)
        self._memo[r.bits] = result
        return result

    def counterexample_holds(self, r: PlaceRelation, cx: BisimCounterexample) -> bool:
        """Re-run the transfer condition named by ``cx``; True if it still fails."""
        net = self.net
        rel = r if cx.condition == 1 else relation_inverse(r)
        tr1 = net.transitions[cx.transition]
        if cx.transition not in self.live or not in_closure(rel, tr1.pre, cx.marking):
            return False
        for t2 in self.by_pre.get(cx.marking, []):
            tr2 = net.transitions[t2]
            if tr2.label == tr1.label and in_closure(rel, tr1.post, tr2.post) and not rel.bits & self.forbidden(cx.transition, t2):
                return False
        return True

    # -- search -----------------------------------------------------------

    def passive_places(self) -> list[int]:
        """Places outside every pre-set and inhibiting set of firable transitions."""
        busy = set()
        for i in self.live:
            t = self.net.transitions[i]
            busy.update(t.pre)
            busy.update(t.inhib)
        return [p for p in range(self.n) if p not in busy]

    def _pair_sets(self, left: Multiset, right: Multiset, inside: int, allowed: int) -> list[int]:
        """Subset-minimal sets of new pairs making ``(left, right)`` related.

        Pairs already in ``inside`` are free; new pairs must lie in ``allowed``.
        Results are bit masks of the new pairs only.
        """
        n = self.n
        if left.size != right.size:
            return []
        usable = inside | allowed
        lt = left.tokens()
        memo: dict[tuple[int, tuple[tuple[int, int], ...]], set[int]] = {}

        def go(i: int, rest: tuple[tuple[int, int], ...]) -> set[int]:
            if i == len(lt):
                return set() if rest else {0}
            key = (i, rest)
            if key in memo:
                return memo[key]
            s = lt[i]
            out: set[int] = set()
            for idx, (q, k) in enumerate(rest):
                bit = 1 << (s * n + q)
                if not usable & bit:
                    continue
                nrest = rest[:idx] + (((q, k - 1),) if k > 1 else ()) + rest[idx + 1:]
                new = 0 if inside & bit else bit
                for sub in go(i + 1, nrest):
                    out.add(sub | new)
            memo[key] = out
            return out

        found = go(0, tuple(right.items()))
        ordered = sorted(found, key=lambda b: (b.bit_count(), b))
        minimal: list[int] = []
        for b in ordered:
            if not any(m & b == m for m in minimal):
                minimal.append(b)
        return minimal

    def _obligations(self, inside: int, out: int):
        """Unmet obligations of ``inside`` with their ways of being met.

        Yields ``(options, key)`` where each option is ``(new_pairs, forbid)``.
        """
        net = self.net
        n = self.n
        rel = PlaceRelation(n, bits=inside)
        inv = relation_inverse(rel)
        for cond, r in ((1, rel), (2, inv)):
            for t1 in self.live:
                tr1 = net.transitions[t1]
                for m in related_markings(r, tr1.pre):
                    cands = [t2 for t2 in self.by_pre.get(m, ()) if net.transitions[t2].label == tr1.label]
                    options = []
                    met = False
                    for t2 in cands:
                        a, b = (t1, t2) if cond == 1 else (t2, t1)
                        forb = self.forbidden(a, b)
                        if inside & forb:
                            continue
                        pa, pb = net.transitions[a].post, net.transitions[b].post
                        if in_closure(rel, pa, pb):
                            met = True
                            break
                        for new in self._pair_sets(pa, pb, inside, ~(out | forb) & ((1 << n * n) - 1)):
                            options.append((new, forb))
                    if not met:
                        yield options, (cond, t1, m)

    def search(self, inside: int, out: int, tracker: _Tracker) -> int | None:
        """Find a bisimulation B with ``inside <= B`` and ``B & out == 0``.

        Complete: returns None only if no such B exists.
        """
        tracker.tick()
        if inside & out:
            tracker.pruned += 1
            return None
        best = None
        for options, _key in self._obligations(inside, out):
            if not options:
                tracker.pruned += 1
                return None
            if best is None or len(options) < len(best):
                best = options
                if len(best) == 1:
                    break
        if best is None:
            return inside
        for new, forb in best:
            found = self.search(inside | new, out | forb, tracker)
            if found is not None:
                return found
        return None

    def grow(self, bits: int, tracker: _Tracker) -> int:
        """Extend a bisimulation to a maximal one, trying pairs in row-major order."""
        for k in range(self.n * self.n):
            bit = 1 << k
            if bits & bit:
                continue
            found = self.search(bits | bit, 0, tracker)
            if found is not None:
                bits = found
        return bits


def inhibitor_consistent(net: PtiNet, r: PlaceRelation, t1: int | str, t2: int | str) -> tuple[int, int] | None:
    """First pair (s, s') of ``r`` (row-major) where exactly one of s, s'
    inhibits its transition; None when the inhibiting behaviour agrees."""
    return BisimChecker(net).inhibitor_consistent(r, net.transition_index(t1), net.transition_index(t2))


_checkers: dict[int, BisimChecker] = {}


def checker_for(net: PtiNet) -> BisimChecker:
    c = _checkers.get(id(net))
    if c is None or c.net is not net:
        c = BisimChecker(net)
        _checkers[id(net)] = c
    return c


def is_pti_place_bisimulation(net: PtiNet, r: PlaceRelation) -> BisimCounterexample | None:
    """None if ``r`` is a pti-place bisimulation, else the first failing case."""
    if r.n != net.n_places:
        raise ValueError("relation and net have different place counts")
    return checker_for(net).check(r)


def decide_equiv(
    net: PtiNet,
    m1: Multiset,
    m2: Multiset,
    budget: Budget | None = None,
    *,
    strategy: str = "search",
    maximal: bool = True,
) -> EquivVerdict:
    """Decide whether two markings are pti-place bisimilar.

    With ``maximal`` the witness is grown to a maximal bisimulation, which
    is usually the more informative relation to report.
    """
    checker = checker_for(net)
    tracker = _Tracker(budget)
    if m1.size != m2.size:
        return EquivVerdict(False)
    try:
        if strategy == "search":
            if m1 == m2:
                found: int | None = relation_identity(net.n_places).bits
            else:
                found = None
                n = net.n_places
                starts = checker._pair_sets(m1, m2, 0, (1 << n * n) - 1)
                for start in starts:
                    found = checker.search(start, 0, tracker)
                    if found is not None:
                        break
        elif strategy == "enumerate":
            found = _enumerate(checker, m1, m2, budget or Budget(), tracker)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        if found is not None and maximal:
            found = checker.grow(found, tracker)
    except BudgetExhausted:
        return EquivVerdict(None, relations_examined=tracker.nodes, pruned=tracker.pruned)
    if found is None:
        return EquivVerdict(False, relations_examined=tracker.nodes, pruned=tracker.pruned)
    witness = PlaceRelation(net.n_places, bits=found)
    assert checker.check(witness) is None
    return EquivVerdict(True, witness, closure_member(witness, m1, m2), tracker.nodes, tracker.pruned)


def _enumerate(checker: BisimChecker, m1: Multiset, m2: Multiset, budget: Budget, tracker: _Tracker) -> int | None:
    n = checker.n
    if n > MAX_ENUMERATED_PLACES and not budget.exhaustive:
        raise ValueError(f"enumeration over {n} places needs exhaustive=True")
    need_left = [p for p in m1]
    need_right = [q for q in m2]
    for k in range(n * n + 1):
        for combo in combinations(range(n * n), k):
            tracker.tick()
            r = PlaceRelation(n, bits=sum(1 << b for b in combo))
            if any(not r.image(p) for p in need_left) or any(not r.preimage(q) for q in need_right):
                tracker.pruned += 1
                continue
            if in_closure(r, m1, m2) and checker.check(r) is None:
                return r.bits
    return None


def maximal_bisimulations(net: PtiNet, budget: Budget | None = None) -> MaximalBisimulations:
    """All pti-place bisimulations of ``net`` that are maximal under inclusion.

    Pairs of places that occur in no pre-set or inhibiting set of a firable
    transition belong to every maximal bisimulation and are fixed up front;
    the other pairs are decided one by one with a feasibility search pruning
    dead branches.
    """
    checker = checker_for(net)
    tracker = _Tracker(budget)
    n = net.n_places
    passive = checker.passive_places()
    fixed = PlaceRelation(n, ((i, j) for i in passive for j in passive)).bits
    free = [k for k in range(n * n) if not fixed >> k & 1]
    leaves: list[int] = []
    truncated = False

    def dfs(i: int, inside: int, out: int, witness: int | None) -> None:
        if witness is None or witness & inside != inside or witness & out:
            witness = checker.search(inside, out, tracker)
            if witness is None:
                return
        if i == len(free):
            leaves.append(inside)
            return
        bit = 1 << free[i]
        dfs(i + 1, inside | bit, out, witness)
        dfs(i + 1, inside, out | bit, witness)

    try:
        dfs(0, fixed, 0, None)
    except BudgetExhausted:
        truncated = True
    maximal = [b for b in leaves if not any(o != b and o & b == b for o in leaves)]
    rels = sorted((PlaceRelation(n, bits=b) for b in set(maximal)), key=PlaceRelation.sort_key)
    return MaximalBisimulations(rels, truncated, tracker.nodes)
