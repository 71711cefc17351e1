"""Finite P/T nets with inhibitor arcs, multisets over places and the token game."""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class Multiset(Mapping[int, int]):
    """Immutable multiset over place indices.

    Only positive counts are stored, so ``len(m)`` is the size of the support
    and ``m.size`` the total number of tokens.  ``+`` is multiset union, ``-``
    is truncated difference, ``<=`` is inclusion and ``j * m`` scales.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, counts: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(counts, Mapping):
            counts = counts.items()
        acc: dict[int, int] = {}
        for place, k in counts:
            if k < 0:
                raise ValueError(f"negative multiplicity {k} for place {place}")
            if k:
                acc[place] = acc.get(place, 0) + k
        self._items = tuple(sorted(acc.items()))
        self._hash = hash(self._items)

    @classmethod
    def of(cls, *places: int) -> "Multiset":
        """Multiset holding one token per argument (repeats accumulate)."""
        return cls((p, 1) for p in places)

    def __getitem__(self, place: int) -> int:
        for p, k in self._items:
            if p == place:
                return k
        raise KeyError(place)

    def get(self, place, default=0):
        for p, k in self._items:
            if p == place:
                return k
        return default

    def __iter__(self) -> Iterator[int]:
        return (p for p, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Multiset):
            return self._items == other._items
        return NotImplemented

    def __repr__(self) -> str:
        if not self._items:
            return "Multiset()"
        return "Multiset({%s})" % ", ".join(f"{p}: {k}" for p, k in self._items)

    @property
    def size(self) -> int:
        return sum(k for _, k in self._items)

    def items(self):
        return self._items

    def tokens(self) -> tuple[int, ...]:
        """Places with multiplicity, in ascending index order."""
        return tuple(p for p, k in self._items for _ in range(k))

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.size, self.tokens())

    def __add__(self, other: "Multiset") -> "Multiset":
        return Multiset(self._items + other._items)

    def __sub__(self, other: "Multiset") -> "Multiset":
        return Multiset((p, max(k - other.get(p, 0), 0)) for p, k in self._items)

    def __le__(self, other: "Multiset") -> bool:
        return all(k <= other.get(p, 0) for p, k in self._items)

    def __rmul__(self, j: int) -> "Multiset":
        if j < 0:
            raise ValueError("scalar must be non-negative")
        return Multiset((p, j * k) for p, k in self._items)


EMPTY = Multiset()


def ms_add(a: Multiset, b: Multiset) -> Multiset:
    return a + b


def ms_sub(a: Multiset, b: Multiset) -> Multiset:
    return a - b


def ms_leq(a: Multiset, b: Multiset) -> bool:
    return a <= b


def ms_scale(j: int, a: Multiset) -> Multiset:
    return j * a


@dataclass(frozen=True)
class Transition:
    name: str
    label: str
    pre: Multiset
    post: Multiset
    inhib: frozenset[int] = frozenset()

    @property
    def dead(self) -> bool:
        """True when a pre-set place also inhibits the transition."""
        return any(p in self.inhib for p in self.pre)


class NetError(ValueError):
    pass


class NotEnabledError(Exception):
    """Raised when firing a transition that is not enabled.

    ``reason`` is ``"missing"`` (a pre-set place lacks tokens) or
    ``"inhibited"`` (an inhibiting place is marked); ``place`` is the
    offending place index.
    """

    def __init__(self, transition: str, reason: str, place: int, place_name: str = ""):
        self.transition = transition
        self.reason = reason
        self.place = place
        self.place_name = place_name
        what = "missing tokens in" if reason == "missing" else "inhibited by"
        super().__init__(f"{transition} not enabled: {what} {place_name or place}")


class FiringSequenceError(Exception):
    def __init__(self, index: int, cause: NotEnabledError):
        self.index = index
        self.cause = cause
        super().__init__(f"transition at index {index} not enabled: {cause}")


@dataclass(frozen=True)
class PtiNet:
    """A finite PTI net.

    Places and transitions are identified by their position in declaration
    order; names are only used for parsing and printing.
    """

    name: str
    places: tuple[str, ...]
    transitions: tuple[Transition, ...]
    markings: Mapping[str, Multiset] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.places)) != len(self.places):
            raise NetError("duplicate place name")
        names = [t.name for t in self.transitions]
        if len(set(names)) != len(names):
            raise NetError("duplicate transition name")
        n = len(self.places)
        for t in self.transitions:
            if not t.pre.size or not t.post.size:
                raise NetError(f"transition {t.name} needs a nonempty pre-set and post-set")
            for p in (*t.pre, *t.post, *t.inhib):
                if not 0 <= p < n:
                    raise NetError(f"transition {t.name} references undeclared place {p}")
        for mname, m in self.markings.items():
            if any(not 0 <= p < n for p in m):
                raise NetError(f"marking {mname} references an undeclared place")
        object.__setattr__(self, "_place_index", {s: i for i, s in enumerate(self.places)})
        object.__setattr__(self, "_trans_index", {t.name: i for i, t in enumerate(self.transitions)})
        dead = [t.name for t in self.transitions if t.dead]
        if dead:
            warnings.warn(f"net {self.name}: transitions can never fire: {', '.join(dead)}", stacklevel=3)

    @classmethod
    def build(
        cls,
        name: str,
        places: Sequence[str],
        transitions: Iterable[tuple],
        markings: Mapping[str, str] | None = None,
    ) -> "PtiNet":
        """Convenience constructor working with names.

        Each transition is ``(name, label, pre, post)`` or
        ``(name, label, pre, post, inhib)`` where ``pre``/``post`` are
        marking expressions such as ``"2*s1 + s2"`` and ``inhib`` an iterable
        of place names.
        """
        from ptiplace.io import parse_multiset

        index = {s: i for i, s in enumerate(places)}
        ts = []
        for spec in transitions:
            tname, label, pre, post, *rest = spec
            inhib = rest[0] if rest else ()
            try:
                inh = frozenset(index[s] for s in inhib)
            except KeyError as exc:
                raise NetError(f"undeclared place {exc.args[0]}") from None
            ts.append(Transition(tname, label, parse_multiset(pre, index), parse_multiset(post, index), inh))
        ms = {k: parse_multiset(v, index) for k, v in (markings or {}).items()}
        return cls(name, tuple(places), tuple(ts), ms)

    @property
    def n_places(self) -> int:
        return len(self.places)

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(t.label for t in self.transitions)

    def place_index(self, name: str) -> int:
        try:
            return self._place_index[name]
        except KeyError:
            raise KeyError(f"unknown place {name!r}") from None

    def transition_index(self, t: int | str) -> int:
        if isinstance(t, int):
            if not 0 <= t < len(self.transitions):
                raise KeyError(f"unknown transition {t}")
            return t
        try:
            return self._trans_index[t]
        except KeyError:
            raise KeyError(f"unknown transition {t!r}") from None

    def transition(self, t: int | str) -> Transition:
        return self.transitions[self.transition_index(t)]

    def marking(self, text: str) -> Multiset:
        """Parse a marking expression, or look up a named marking."""
        if text in self.markings:
            return self.markings[text]
        from ptiplace.io import parse_multiset

        return parse_multiset(text, self._place_index)

    def format_marking(self, m: Multiset) -> str:
        from ptiplace.io import format_multiset

        return format_multiset(m, self.places)

    def dead_transitions(self) -> list[str]:
        return [t.name for t in self.transitions if t.dead]

    def flow(self) -> set[tuple[str, str]]:
        """Flow relation F as (source, target) name pairs."""
        arcs = set()
        for t in self.transitions:
            arcs.update((self.places[p], t.name) for p in t.pre)
            arcs.update((t.name, self.places[p]) for p in t.post)
        return arcs

    def inhibiting(self) -> set[tuple[str, str]]:
        return {(self.places[p], t.name) for t in self.transitions for p in t.inhib}


def _why_disabled(net: PtiNet, m: Multiset, t: Transition) -> tuple[str, int] | None:
    for p, k in t.pre.items():
        if m.get(p, 0) < k:
            return ("missing", p)
    for p in sorted(t.inhib):
        if p in m:
            return ("inhibited", p)
    return None


def enabled(net: PtiNet, m: Multiset, t: int | str) -> bool:
    tr = net.transition(t)
    return tr.pre <= m and not any(p in m for p in tr.inhib)


def enabled_transitions(net: PtiNet, m: Multiset) -> list[int]:
    return [i for i in range(len(net.transitions)) if enabled(net, m, i)]


def fire(net: PtiNet, m: Multiset, t: int | str) -> Multiset:
    tr = net.transition(t)
    why = _why_disabled(net, m, tr)
    if why is not None:
        raise NotEnabledError(tr.name, why[0], why[1], net.places[why[1]])
    return (m - tr.pre) + tr.post


def fire_sequence(net: PtiNet, m0: Multiset, seq: Sequence[int | str]) -> Multiset:
    m = m0
    for i, t in enumerate(seq):
        try:
            m = fire(net, m, t)
        except NotEnabledError as exc:
            raise FiringSequenceError(i, exc) from None
    return m


@dataclass
class Reachability:
    markings: list[Multiset]
    truncated: bool
    # marking -> (predecessor, transition index); None for the root
    parent: dict[Multiset, tuple[Multiset, int] | None]

    def path_to(self, m: Multiset) -> list[int]:
        path = []
        step = self.parent[m]
        while step is not None:
            prev, t = step
            path.append(t)
            step = self.parent[prev]
        return path[::-1]


def reachable_bounded(net: PtiNet, m0: Multiset, max_markings: int, max_size: int) -> Reachability:
    """Breadth-first exploration of the reachable markings.

    Stops once ``max_markings`` markings are known; markings with more than
    ``max_size`` tokens are not stored.  ``truncated`` is set whenever either
    bound cut the exploration short.
    """
    if max_markings < 1 or max_size < 1:
        raise ValueError("bounds must be >= 1")
    parent: dict[Multiset, tuple[Multiset, int] | None] = {m0: None}
    order = [m0]
    queue = deque([m0])
    truncated = False
    while queue:
        m = queue.popleft()
        for i in enabled_transitions(net, m):
            m2 = fire(net, m, i)
            if m2 in parent:
                continue
            if m2.size > max_size or len(order) >= max_markings:
                truncated = True
                continue
            parent[m2] = (m, i)
            order.append(m2)
            queue.append(m2)
    return Reachability(order, truncated, parent)
