"""Causal semantics of PTI nets: processes with before/after inhibitor arcs.

A process is a causal net (conditions and events forming an acyclic,
unbranched net) together with a folding onto the system net.  Inhibitor arcs
of the causal net are split into *before* arcs (the event happened before the
inhibiting condition was produced) and *after* arcs (the condition had
already been consumed).  Conditions and events are numbered in creation
order, so extending the same process in the same way always yields equal
values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Iterator

from ptiplace.net import Multiset, PtiNet


@dataclass(frozen=True)
class Event:
    label: str
    pre: tuple[int, ...]
    post: tuple[int, ...]


@dataclass(frozen=True)
class CausalNet:
    n_conditions: int
    events: tuple[Event, ...] = ()
    before: frozenset[tuple[int, int]] = frozenset()
    after: frozenset[tuple[int, int]] = frozenset()

    @cached_property
    def producer(self) -> tuple[int | None, ...]:
        prod: list[int | None] = [None] * self.n_conditions
        for i, e in enumerate(self.events):
            for b in e.post:
                prod[b] = i
        return tuple(prod)

    @cached_property
    def consumer(self) -> tuple[int | None, ...]:
        cons: list[int | None] = [None] * self.n_conditions
        for i, e in enumerate(self.events):
            for b in e.pre:
                cons[b] = i
        return tuple(cons)

    def initial(self) -> list[int]:
        return [b for b in range(self.n_conditions) if self.producer[b] is None]

    def maximal(self) -> list[int]:
        return [b for b in range(self.n_conditions) if self.consumer[b] is None]


@dataclass(frozen=True)
class Folding:
    conditions: tuple[int, ...]  # place of each condition
    events: tuple[int, ...] = ()  # transition of each event


@dataclass(frozen=True)
class PtiProcess:
    net: PtiNet = field(compare=False, repr=False)
    causal: CausalNet
    folding: Folding

    def image(self, conds) -> Multiset:
        return Multiset.of(*(self.folding.conditions[b] for b in conds))

    @property
    def initial_marking(self) -> Multiset:
        return self.image(self.causal.initial())

    @property
    def final_marking(self) -> Multiset:
        return self.image(self.causal.maximal())

    def transitions(self) -> list[str]:
        return [self.net.transitions[t].name for t in self.folding.events]


def initial_process(net: PtiNet, m0: Multiset) -> PtiProcess:
    places = m0.tokens()
    return PtiProcess(net, CausalNet(len(places)), Folding(places))


def _extend(net: PtiNet, causal: CausalNet, rho_c, rho_e, t: int, pre: tuple[int, ...], post_places):
    """One move through a fresh event for ``t`` consuming ``pre``.

    Returns ``(causal', rho_c', rho_e')`` or None when a maximal condition
    inhibits ``t``.
    """
    tr = net.transitions[t]
    inhib = tr.inhib
    if any(rho_c[b] in inhib for b in causal.maximal()):
        return None
    e = len(causal.events)
    first = causal.n_conditions
    post = tuple(range(first, first + len(post_places)))
    # consumed conditions inhibiting t
    after = {(b, e) for b in range(causal.n_conditions) if causal.consumer[b] is not None and rho_c[b] in inhib}
    before = set()
    for b, p in zip(post, post_places):
        for e2, t2 in enumerate(rho_e):
            if p in net.transitions[t2].inhib:
                before.add((b, e2))
    new = CausalNet(
        first + len(post),
        causal.events + (Event(tr.label, pre, post),),
        causal.before | before,
        causal.after | after,
    )
    return new, tuple(rho_c) + tuple(post_places), tuple(rho_e) + (t,)


def _pre_choices(tr, maxc, rho_c) -> Iterator[tuple[int, ...]]:
    by_place: dict[int, list[int]] = {}
    for b in maxc:
        by_place.setdefault(rho_c[b], []).append(b)
    groups = []
    for p, k in tr.pre.items():
        avail = by_place.get(p, [])
        if len(avail) < k:
            return
        groups.append(list(combinations(avail, k)))
    for pick in product(*groups):
        yield tuple(sorted(b for g in pick for b in g))


def process_extensions(net: PtiNet, p: PtiProcess) -> list[tuple[int, PtiProcess]]:
    """All one-event extensions of ``p``, by transition then pre-set choice."""
    out = []
    causal, rho = p.causal, p.folding
    maxc = causal.maximal()
    for t, tr in enumerate(net.transitions):
        for pre in _pre_choices(tr, maxc, rho.conditions):
            step = _extend(net, causal, rho.conditions, rho.events, t, pre, tr.post.tokens())
            if step is None:
                continue
            c2, rc, re = step
            out.append((t, PtiProcess(net, c2, Folding(rc, re))))
    return out


@dataclass(frozen=True)
class Violation:
    clause: str
    detail: str


def _acyclic(n_nodes: int, edges: dict[int, set[int]]) -> bool:
    state = [0] * n_nodes
    for root in range(n_nodes):
        if state[root]:
            continue
        stack = [(root, iter(edges.get(root, ())))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if state[nxt] == 1:
                    return False
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(edges.get(nxt, ()))))
                    break
            else:
                state[node] = 2
                stack.pop()
    return True


def validate(p: PtiProcess, m0: Multiset | None = None) -> list[Violation]:
    """Every way in which ``p`` fails to be a PTI process of its net.

    ``m0`` is the initial marking of the net system, defaulting to the image
    of the initial conditions.
    """
    net, c, rho = p.net, p.causal, p.folding
    out: list[Violation] = []
    nb = c.n_conditions
    if len(rho.conditions) != nb or len(rho.events) != len(c.events):
        return [Violation("folding", "folding does not cover every condition and event")]
    if any(not 0 <= s < net.n_places for s in rho.conditions) or any(not 0 <= t < len(net.transitions) for t in rho.events):
        return [Violation("folding", "folding maps outside the net")]

    produced = [0] * nb
    consumed = [0] * nb
    for i, e in enumerate(c.events):
        if len(set(e.pre)) != len(e.pre) or len(set(e.post)) != len(e.post):
            out.append(Violation("arc-weight", f"event e{i} has an arc of weight > 1"))
        for b in e.pre:
            consumed[b] += 1
        for b in e.post:
            produced[b] += 1
    for b in range(nb):
        if produced[b] > 1 or consumed[b] > 1:
            out.append(Violation("unbranched", f"condition b{b} is branched"))

    # flow graph: conditions 0..nb-1, events nb..
    edges: dict[int, set[int]] = {}
    for i, e in enumerate(c.events):
        for b in e.pre:
            edges.setdefault(b, set()).add(nb + i)
        for b in e.post:
            edges.setdefault(nb + i, set()).add(b)
    if not _acyclic(nb + len(c.events), edges):
        out.append(Violation("acyclic", "flow relation has a cycle"))

    for b, e in sorted(c.before):
        if c.producer[b] is None:
            out.append(Violation("before-requirement", f"before arc (b{b}, e{e}) on a condition nobody produces"))
    for b, e in sorted(c.after):
        if c.consumer[b] is None:
            out.append(Violation("after-requirement", f"after arc (b{b}, e{e}) on a condition nobody consumes"))

    order_edges = {k: set(v) for k, v in edges.items()}
    for b, e in c.after:
        if c.consumer[b] is not None:
            order_edges.setdefault(nb + c.consumer[b], set()).add(nb + e)
    for b, e in c.before:
        if c.producer[b] is not None:
            order_edges.setdefault(nb + e, set()).add(nb + c.producer[b])
    if not _acyclic(nb + len(c.events), order_edges):
        out.append(Violation("acyclic-inhibitor", "flow together with the before/after orders has a cycle"))

    if m0 is not None and p.initial_marking != m0:
        out.append(Violation("initial-marking", "initial conditions do not fold onto the initial marking"))
    for i, (e, t) in enumerate(zip(c.events, rho.events)):
        tr = net.transitions[t]
        if e.label != tr.label:
            out.append(Violation("label", f"event e{i} labelled {e.label}, {tr.name} labelled {tr.label}"))
        if p.image(e.pre) != tr.pre:
            out.append(Violation("pre-image", f"pre-set of e{i} does not fold onto the pre-set of {tr.name}"))
        if p.image(e.post) != tr.post:
            out.append(Violation("post-image", f"post-set of e{i} does not fold onto the post-set of {tr.name}"))
        for b in range(nb):
            if rho.conditions[b] in tr.inhib and (b, i) not in c.before and (b, i) not in c.after and b not in e.post:
                out.append(Violation("inhibitor-coherence", f"b{b} inhibits e{i} in the net but has no arc"))
    for b, e in sorted(c.before | c.after):
        if e >= len(c.events) or b >= nb:
            out.append(Violation("inhibitor-coherence", f"arc (b{b}, e{e}) refers to unknown nodes"))
        elif rho.conditions[b] not in net.transitions[rho.events[e]].inhib:
            out.append(Violation("inhibitor-coherence", f"arc (b{b}, e{e}) has no inhibitor arc in the net"))
    return out


def process_of_sequence(net: PtiNet, m0: Multiset, seq) -> PtiProcess:
    """Build the process of a firing sequence, consuming the oldest tokens first."""
    p = initial_process(net, m0)
    for t in seq:
        t = net.transition_index(t)
        tr = net.transitions[t]
        pre = next(_pre_choices(tr, p.causal.maximal(), p.folding.conditions), None)
        step = None if pre is None else _extend(net, p.causal, p.folding.conditions, p.folding.events, t, pre, tr.post.tokens())
        if step is None:
            raise ValueError(f"{tr.name} cannot extend the process")
        p = PtiProcess(net, step[0], Folding(step[1], step[2]))
    return p


# -- bounded causal-net bisimulation game ----------------------------------


@dataclass(frozen=True)
class GameStep:
    side: int
    attacker: str
    pre: tuple[int, ...]
    defender: str | None  # None: no answer exists


@dataclass
class CnVerdict:
    status: str  # equivalent_to_depth | distinguished | budget_exhausted
    depth: int
    trace: list[GameStep] = field(default_factory=list)
    nodes: int = 0


class _GameBudget(Exception):
    pass


class _Game:
    def __init__(self, net: PtiNet, max_nodes: int | None):
        self.net = net
        self.max_nodes = max_nodes
        self.nodes = 0
        self.memo: dict = {}

    def moves(self, state, side):
        c, r1c, r1e, r2c, r2e = state
        rc, re = (r1c, r1e) if side == 1 else (r2c, r2e)
        maxc = c.maximal()
        for t, tr in enumerate(self.net.transitions):
            for pre in _pre_choices(tr, maxc, rc):
                step = _extend(self.net, c, rc, re, t, pre, tr.post.tokens())
                if step is not None:
                    yield t, pre, step

    def answers(self, state, side, pre, target):
        """Answers by the other side reproducing causal net ``target``."""
        c, r1c, r1e, r2c, r2e = state
        rc, re = (r2c, r2e) if side == 1 else (r1c, r1e)
        net = self.net
        label = target.events[-1].label
        need = Multiset.of(*(rc[b] for b in pre))
        npost = len(target.events[-1].post)
        for t, tr in enumerate(net.transitions):
            if tr.label != label or tr.pre != need or tr.post.size != npost:
                continue
            for posts in sorted(set(permutations(tr.post.tokens()))):
                step = _extend(net, c, rc, re, t, pre, posts)
                if step is not None and step[0] == target:
                    yield t, step

    def _next(self, state, side, step1, step2):
        c2 = step1[0]
        if side == 1:
            return (c2, step1[1], step1[2], step2[1], step2[2])
        return (c2, step2[1], step2[2], step1[1], step1[2])

    def attacker_wins(self, state, depth: int) -> bool:
        if depth == 0:
            return False
        key = (state, depth)
        if key in self.memo:
            return self.memo[key]
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _GameBudget
        win = False
        for side in (1, 2):
            for _t, pre, step in self.moves(state, side):
                if all(self.attacker_wins(self._next(state, side, step, ans), depth - 1) for _u, ans in self.answers(state, side, pre, step[0])):
                    win = True
                    break
            if win:
                break
        self.memo[key] = win
        return win

    def trace(self, state, depth: int) -> list[GameStep]:
        names = [t.name for t in self.net.transitions]
        for side in (1, 2):
            for t, pre, step in self.moves(state, side):
                answers = list(self.answers(state, side, pre, step[0]))
                if all(self.attacker_wins(self._next(state, side, step, ans), depth - 1) for _u, ans in answers):
                    if not answers:
                        return [GameStep(side, names[t], pre, None)]
                    u, ans = answers[0]
                    rest = self.trace(self._next(state, side, step, ans), depth - 1)
                    return [GameStep(side, names[t], pre, names[u])] + rest
        return []


def cn_bisim_bounded(net: PtiNet, m1: Multiset, m2: Multiset, depth: int, max_nodes: int | None = 500_000) -> CnVerdict:
    """Play the causal-net bisimulation game for at most ``depth`` events.

    Both sides extend one shared causal net; an answer must rebuild exactly
    the causal net produced by the attacking move, before and after arcs
    included.  ``distinguished`` comes with a shortest attacking sequence.
    ``equivalent_to_depth`` only says no attack of that length succeeds.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if m1.size != m2.size:
        return CnVerdict("distinguished", 0)
    # the shared initial conditions may fold onto m2 in any order; the attack must beat every one
    a = m1.tokens()
    roots = [(CausalNet(len(a)), a, (), b, ()) for b in sorted(set(permutations(m2.tokens())))]
    game = _Game(net, max_nodes)
    try:
        for d in range(1, depth + 1):
            if all(game.attacker_wins(root, d) for root in roots):
                return CnVerdict("distinguished", d, game.trace(roots[0], d), game.nodes)
    except _GameBudget:
        return CnVerdict("budget_exhausted", depth, nodes=game.nodes)
    return CnVerdict("equivalent_to_depth", depth, nodes=game.nodes)


def unfold(net: PtiNet, m0: Multiset, max_events: int) -> list[list[PtiProcess]]:
    """Processes of ``net`` from ``m0`` grouped by number of events, up to ``max_events``."""
    levels = [[initial_process(net, m0)]]
    for _ in range(max_events):
        seen: dict[PtiProcess, None] = {}
        for p in levels[-1]:
            for _t, q in process_extensions(net, p):
                seen.setdefault(q)
        if not seen:
            break
        levels.append(list(seen))
    return levels
