"""Text formats: ``.pti`` nets, ``.rel`` place relations and JSON verdict reports.

Net files look like::

    net fig1
    places: s1 s2 s3 s4 s5
    trans t1 : a ; pre s1 ; post s2
    trans t2 : b ; pre s3 ; inh s2 ; post s4
    marking m0 : s1 + s3

Marking expressions are ``term (+ term)*`` with ``term := [NAT *] IDENT``;
``0`` is the empty marking.  ``#`` starts a comment.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from ptiplace import __version__
from ptiplace.closure import PlaceRelation
from ptiplace.net import Multiset, NetError, PtiNet, Transition

IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_ident = re.compile(rf"^{IDENT}$")
_term = re.compile(rf"^(?:(\d+)\s*\*\s*)?({IDENT})$")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def parse_multiset(text: str, index: Mapping[str, int]) -> Multiset:
    text = text.strip()
    if text == "0":
        return Multiset()
    if not text:
        raise ParseError("empty marking expression")
    counts: dict[int, int] = {}
    for raw in text.split("+"):
        m = _term.match(raw.strip())
        if not m:
            raise ParseError(f"bad marking term {raw.strip()!r}")
        k = int(m.group(1)) if m.group(1) else 1
        name = m.group(2)
        if name not in index:
            raise ParseError(f"undeclared place {name!r}")
        counts[index[name]] = counts.get(index[name], 0) + k
    return Multiset(counts)


def format_multiset(m: Multiset, places: Sequence[str]) -> str:
    if not m:
        return "0"
    return " + ".join(places[p] if k == 1 else f"{k}*{places[p]}" for p, k in m.items())


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_net(text: str) -> PtiNet:
    name = None
    places: list[str] | None = None
    transitions: list[Transition] = []
    markings: dict[str, Multiset] = {}
    index: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        head, _, rest = line.partition(" ")
        head = head.rstrip(":")
        try:
            if head == "net":
                if name is not None:
                    raise ParseError("duplicate net header")
                if not _ident.match(rest.strip()):
                    raise ParseError(f"bad net name {rest.strip()!r}")
                name = rest.strip()
            elif head == "places":
                if name is None:
                    raise ParseError("places before net header")
                if places is not None:
                    raise ParseError("duplicate places section")
                body = line.split(":", 1)[1] if ":" in line else ""
                places = body.split()
                if not places:
                    raise ParseError("no places declared")
                for p in places:
                    if not _ident.match(p):
                        raise ParseError(f"bad place name {p!r}")
                    if p in index:
                        raise ParseError(f"duplicate place {p!r}")
                    index[p] = len(index)
            elif head == "trans":
                if places is None:
                    raise ParseError("transition before places")
                if markings:
                    raise ParseError("transition after markings")
                transitions.append(_parse_trans(rest, index, {t.name for t in transitions}))
            elif head == "marking":
                if places is None:
                    raise ParseError("marking before places")
                mname, sep, expr = rest.partition(":")
                mname = mname.strip()
                if not sep or not _ident.match(mname):
                    raise ParseError("expected 'marking NAME : expr'")
                if mname in markings:
                    raise ParseError(f"duplicate marking {mname!r}")
                markings[mname] = parse_multiset(expr, index)
            else:
                raise ParseError(f"unexpected {head!r}")
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
    if name is None or places is None:
        raise ParseError("missing net header or places")
    try:
        return PtiNet(name, tuple(places), tuple(transitions), markings)
    except NetError as exc:
        raise ParseError(str(exc)) from None


def _parse_trans(rest: str, index: Mapping[str, int], seen: set[str]) -> Transition:
    head, sep, body = rest.partition(";")
    tname, sep2, label = head.partition(":")
    tname, label = tname.strip(), label.strip()
    if not sep or not sep2 or not _ident.match(tname) or not _ident.match(label):
        raise ParseError("expected 'trans NAME : LABEL ; pre ... ; post ...'")
    if tname in seen:
        raise ParseError(f"duplicate transition {tname!r}")
    parts = [p.strip() for p in body.split(";")]
    if len(parts) not in (2, 3) or not parts[0].startswith("pre ") or not parts[-1].startswith("post "):
        raise ParseError(f"transition {tname}: expected pre [; inh] ; post")
    pre = parse_multiset(parts[0][4:], index)
    post = parse_multiset(parts[-1][5:], index)
    if not pre or not post:
        raise ParseError(f"transition {tname}: pre-set and post-set must be nonempty")
    inhib: set[int] = set()
    if len(parts) == 3:
        if not parts[1].startswith("inh "):
            raise ParseError(f"transition {tname}: expected 'inh'")
        for p in parts[1][4:].split(","):
            p = p.strip()
            if p not in index:
                raise ParseError(f"undeclared place {p!r}")
            inhib.add(index[p])
    return Transition(tname, label, pre, post, frozenset(inhib))


def format_net(net: PtiNet) -> str:
    lines = [f"net {net.name}", "places: " + " ".join(net.places)]
    for t in net.transitions:
        parts = [f"trans {t.name} : {t.label}", f"pre {format_multiset(t.pre, net.places)}"]
        if t.inhib:
            parts.append("inh " + ", ".join(net.places[p] for p in sorted(t.inhib)))
        parts.append(f"post {format_multiset(t.post, net.places)}")
        lines.append(" ; ".join(parts))
    for mname, m in net.markings.items():
        lines.append(f"marking {mname} : {format_multiset(m, net.places)}")
    return "\n".join(lines) + "\n"


def load_net(path: str | Path) -> PtiNet:
    return parse_net(Path(path).read_text())


def parse_relation(text: str, net: PtiNet) -> PlaceRelation:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        words = line.split()
        if len(words) != 2:
            raise ParseError("expected 'PLACE PLACE'", lineno)
        try:
            pairs.append((net.place_index(words[0]), net.place_index(words[1])))
        except KeyError as exc:
            raise ParseError(str(exc.args[0]), lineno) from None
    return PlaceRelation(net.n_places, pairs)


def format_relation(r: PlaceRelation, net: PtiNet) -> str:
    return "".join(f"{a} {b}\n" for a, b in r.named(net.places))


def load_relation(path: str | Path, net: PtiNet) -> PlaceRelation:
    return parse_relation(Path(path).read_text(), net)


FIXTURES = ("fig1", "fig2-n1", "fig2-n2", "fig3-upac-upbc", "fig4", "fig5", "fig-ex")


def fixture_path(name: str) -> Path:
    """Path of a bundled ``.pti`` or ``.rel`` fixture."""
    if "." not in name:
        name += ".pti"
    path = resources.files("ptiplace") / "fixtures" / name
    return Path(str(path))


def load_fixture(name: str) -> PtiNet:
    return load_net(fixture_path(name))


@dataclass
class VerdictReport:
    query: dict[str, Any]
    result: bool | None
    witness_relation: list[tuple[str, str]] | None = None
    counterexample: dict[str, Any] | None = None
    relations_examined: int = 0
    pruned: int = 0
    elapsed_ms: float = 0.0
    tool_version: str = __version__
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "query": self.query,
            "result": "unknown" if self.result is None else self.result,
            "relations_examined": self.relations_examined,
            "pruned": self.pruned,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "tool_version": self.tool_version,
        }
        if self.witness_relation is not None:
            d["witness_relation"] = [list(p) for p in self.witness_relation]
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "VerdictReport":
        d = json.loads(text)
        known = {"query", "result", "witness_relation", "counterexample", "relations_examined", "pruned", "elapsed_ms", "tool_version"}
        result = d["result"]
        return cls(
            query=d["query"],
            result=None if result == "unknown" else bool(result),
            witness_relation=[tuple(p) for p in d["witness_relation"]] if "witness_relation" in d else None,
            counterexample=d.get("counterexample"),
            relations_examined=d.get("relations_examined", 0),
            pruned=d.get("pruned", 0),
            elapsed_ms=d.get("elapsed_ms", 0.0),
            tool_version=d.get("tool_version", ""),
            extra={k: v for k, v in d.items() if k not in known},
        )
