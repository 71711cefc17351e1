"""Brute-force reference implementations and random instance generators.

Nothing here reuses the matching, enumeration or finite-condition code of
:mod:`ptiplace.closure` and :mod:`ptiplace.bisim`; the two routes are meant
to be compared against each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product

from ptiplace.net import Multiset, PtiNet, Transition

NAIVE_LIMIT = 8


class OracleRefused(ValueError):
    pass


def _tokens(m) -> list[int]:
    out = []
    for p in sorted(m):
        out.extend([p] * m[p])
    return out


def _has(pairs, a, b) -> bool:
    return (a, b) in pairs


def closure_member_naive(r, m1, m2) -> bool:
    """Try every ordering of the tokens of ``m2`` against those of ``m1``.

    ``r`` is anything supporting ``(s, s') in r``.
    """
    left, right = _tokens(m1), _tokens(m2)
    if len(left) > NAIVE_LIMIT:
        raise OracleRefused(f"{len(left)} tokens exceed the naive limit {NAIVE_LIMIT}")
    if len(left) != len(right):
        return False
    pairs = set(iter(r))
    for perm in set(permutations(right)):
        if all(_has(pairs, a, b) for a, b in zip(left, perm)):
            return True
    return False


def _enabled(t: Transition, m: Multiset) -> bool:
    return all(m.get(p, 0) >= k for p, k in t.pre.items()) and all(m.get(p, 0) == 0 for p in t.inhib)


def _minus(m: Multiset, sub: Multiset) -> Multiset:
    return Multiset({p: max(m.get(p, 0) - sub.get(p, 0), 0) for p in m})


@dataclass(frozen=True)
class DefinitionCounterexample:
    m1: Multiset
    m2: Multiset
    condition: int
    transition: int


def _answer_exists(net, pairs, t1, m1, m2, flip) -> bool:
    # some t2 enabled at m2 answers t1 at m1; flip swaps the roles in R
    def rel(a, b):
        return closure_member_naive(pairs, b, a) if flip else closure_member_naive(pairs, a, b)

    for t2 in net.transitions:
        if not _enabled(t2, m2) or t2.label != t1.label:
            continue
        if not rel(t1.pre, t2.pre) or not rel(t1.post, t2.post):
            continue
        if not rel(_minus(m1, t1.pre), _minus(m2, t2.pre)):
            continue
        ok = True
        for s, s2 in pairs:
            a, b = (s2, s) if flip else (s, s2)
            if (a in t1.inhib) != (b in t2.inhib):
                ok = False
                break
        if ok:
            return True
    return False


def definition_pair_violation(net: PtiNet, r, m1: Multiset, m2: Multiset) -> tuple[int, int] | None:
    """Check the transfer conditions for one related pair of markings.

    Returns ``(condition, transition index)`` of the first unanswered move.
    """
    pairs = set(iter(r))
    for i, t1 in enumerate(net.transitions):
        if _enabled(t1, m1) and not _answer_exists(net, pairs, t1, m1, m2, False):
            return (1, i)
    for i, t2 in enumerate(net.transitions):
        if _enabled(t2, m2) and not _answer_exists(net, pairs, t2, m2, m1, True):
            return (2, i)
    return None


def _markings_of_size(n: int, k: int):
    for combo in combinations_with_replacement(range(n), k):
        yield Multiset.of(*combo)


def bisim_check_by_definition(net: PtiNet, r, size_bound: int) -> DefinitionCounterexample | None:
    """Check the bisimulation conditions on every related pair up to a size.

    Pairs ``(m1, m2)`` in the additive closure of ``r`` with ``|m1| <=
    size_bound`` are visited by increasing size; images of each token are
    chosen independently and kept when the naive permutation test agrees.
    """
    pairs = set(iter(r))
    images: dict[int, list[int]] = {}
    for a, b in sorted(pairs):
        images.setdefault(a, []).append(b)
    n = net.n_places
    for k in range(size_bound + 1):
        for m1 in _markings_of_size(n, k):
            toks = _tokens(m1)
            seen = set()
            for choice in product(*(images.get(p, []) for p in toks)):
                m2 = Multiset.of(*choice)
                if m2 in seen:
                    continue
                seen.add(m2)
                bad = definition_pair_violation(net, pairs, m1, m2)
                if bad is not None:
                    return DefinitionCounterexample(m1, m2, bad[0], bad[1])
    return None


@dataclass(frozen=True)
class GenConfig:
    places: tuple[int, int] = (2, 4)
    transitions: tuple[int, int] = (1, 5)
    max_pre: int = 2
    max_post: int = 2
    inhibitor_density: float = 0.2
    labels: int = 2
    relation_density: float = 0.3
    seed: int = 0

    def __post_init__(self):
        for lo, hi in (self.places, self.transitions):
            if lo > hi or lo < 0:
                raise ValueError("empty range in GenConfig")
        if self.places[0] < 1 or self.max_pre < 1 or self.max_post < 1 or self.labels < 1:
            raise ValueError("GenConfig needs at least one place, label and token per arc")


def _rand_ms(rng: random.Random, n: int, max_size: int) -> Multiset:
    k = rng.randint(1, max_size)
    return Multiset.of(*(rng.randrange(n) for _ in range(k)))


def random_net(cfg: GenConfig) -> PtiNet:
    rng = random.Random(cfg.seed)
    n = rng.randint(*cfg.places)
    nt = rng.randint(*cfg.transitions)
    labels = [chr(ord("a") + i) for i in range(cfg.labels)]
    ts = []
    for i in range(nt):
        pre = _rand_ms(rng, n, cfg.max_pre)
        post = _rand_ms(rng, n, cfg.max_post)
        inhib = frozenset(p for p in range(n) if rng.random() < cfg.inhibitor_density)
        ts.append(Transition(f"t{i}", rng.choice(labels), pre, post, inhib))
    return _quiet_net(f"rand{cfg.seed}", tuple(f"s{i}" for i in range(n)), tuple(ts))


def _quiet_net(name, places, transitions) -> PtiNet:
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return PtiNet(name, places, transitions)


def random_mirrored_net(cfg: GenConfig) -> tuple[PtiNet, list[int]]:
    """A random net next to a renamed copy of itself.

    Returns the net and ``mirror`` with ``mirror[p]`` the copy of place ``p``;
    the copy's transitions are shuffled so the two halves are declared
    differently.
    """
    base = random_net(cfg)
    rng = random.Random(cfg.seed + 7919)
    n = base.n_places
    shift = {p: p + n for p in range(n)}

    def moved(m: Multiset) -> Multiset:
        return Multiset({shift[p]: k for p, k in m.items()})

    copies = [
        Transition(t.name + "c", t.label, moved(t.pre), moved(t.post), frozenset(shift[p] for p in t.inhib))
        for t in base.transitions
    ]
    rng.shuffle(copies)
    places = base.places + tuple(p + "c" for p in base.places)
    return _quiet_net(base.name + "m", places, base.transitions + tuple(copies)), [shift[p] for p in range(n)]


def random_relation(cfg: GenConfig, net: PtiNet, seed: int | None = None):
    from ptiplace.closure import PlaceRelation

    rng = random.Random(cfg.seed if seed is None else seed)
    n = net.n_places
    return PlaceRelation(n, ((i, j) for i in range(n) for j in range(n) if rng.random() < cfg.relation_density))


def random_marking(cfg: GenConfig, net: PtiNet, size: int, seed: int | None = None) -> Multiset:
    rng = random.Random(cfg.seed if seed is None else seed)
    return Multiset.of(*(rng.randrange(net.n_places) for _ in range(size)))
